#include "alphavit/neural/layers.hpp"

#include <stdexcept>

namespace alphavit::neural {
namespace {

// Source coordinate and interpolation weight for position i of n samples
// spread over n0 source positions with aligned endpoints.
void axis_taps(int i, int n, int n0, int& lo, int& hi, double& frac) {
  if (n0 == 1 || n == 1) {
    lo = hi = 0;
    frac = 0.0;
    return;
  }
  const double x = static_cast<double>(i) * (n0 - 1) / (n - 1);
  lo = static_cast<int>(x);
  if (lo >= n0 - 1) {
    lo = hi = n0 - 1;
    frac = 0.0;
    return;
  }
  hi = lo + 1;
  frac = x - lo;
}

}  // namespace

Resampler Resampler::bilinear(int h0, int w0, int h, int w) {
  if (h0 < 1 || w0 < 1 || h < 1 || w < 1) throw std::invalid_argument("empty resampling grid");
  Resampler r;
  r.source_rows = h0 * w0;
  r.source.resize(static_cast<std::size_t>(h) * w);
  r.weight.resize(static_cast<std::size_t>(h) * w);
  for (int i = 0; i < h; ++i) {
    int y0, y1;
    double fy;
    axis_taps(i, h, h0, y0, y1, fy);
    for (int j = 0; j < w; ++j) {
      int x0, x1;
      double fx;
      axis_taps(j, w, w0, x0, x1, fx);
      const int row = i * w + j;
      r.source[row] = {y0 * w0 + x0, y0 * w0 + x1, y1 * w0 + x0, y1 * w0 + x1};
      r.weight[row] = {(1 - fy) * (1 - fx), (1 - fy) * fx, fy * (1 - fx), fy * fx};
    }
  }
  return r;
}

Resampler Resampler::linear(int n0, int n) {
  if (n0 < 1 || n < 1) throw std::invalid_argument("empty resampling sequence");
  Resampler r;
  r.source_rows = n0;
  r.source.resize(n);
  r.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    int a, b;
    double f;
    axis_taps(i, n, n0, a, b, f);
    r.source[i] = {a, b, 0, 0};
    r.weight[i] = {1 - f, f, 0.0, 0.0};
  }
  return r;
}

}  // namespace alphavit::neural
