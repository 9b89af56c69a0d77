#pragma once

// Layer building blocks with explicit forward / backward passes. Activations
// are row-major matrices with one token (or board cell) per row. Each layer
// holds parameter ids into a ParameterLayout; forward() fills a cache that
// backward() consumes, and backward() accumulates into a gradient buffer
// with the same layout.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "alphavit/neural/parameters.hpp"

namespace alphavit::neural {

template <typename T>
using ColVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct Linear {
  int weight = -1;
  int bias = -1;
  int in = 0;
  int out = 0;

  static Linear create(ParameterLayout& layout, const std::string& name, int in, int out) {
    Linear l;
    l.in = in;
    l.out = out;
    l.weight = layout.add(name + ".weight", {out, in});
    l.bias = layout.add(name + ".bias", {out});
    return l;
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& x) const {
    Matrix<T> y = x * p.matrix(weight).transpose();
    y.rowwise() += p.row(bias);
    return y;
  }

  // Accumulates weight gradients; returns dL/dx.
  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Matrix<T>& x, const Matrix<T>& dy,
                     ParameterBuffer<T>& g) const {
    accumulate(x, dy, g);
    return dy * p.matrix(weight);
  }

  template <typename T>
  void accumulate(const Matrix<T>& x, const Matrix<T>& dy, ParameterBuffer<T>& g) const {
    g.matrix(weight).noalias() += dy.transpose() * x;
    g.row(bias) += dy.colwise().sum();
  }
};

struct LayerNorm {
  static constexpr double kEpsilon = 1e-5;

  int gamma = -1;
  int beta = -1;
  int dim = 0;

  template <typename T>
  struct Cache {
    Matrix<T> xhat;
    ColVector<T> inv_std;
  };

  static LayerNorm create(ParameterLayout& layout, const std::string& name, int dim) {
    LayerNorm l;
    l.dim = dim;
    l.gamma = layout.add(name + ".gamma", {dim});
    l.beta = layout.add(name + ".beta", {dim});
    return l;
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& x, Cache<T>& c) const {
    const ColVector<T> mean = x.rowwise().mean();
    Matrix<T> centered = x.colwise() - mean;
    const ColVector<T> var = centered.array().square().rowwise().mean().matrix();
    c.inv_std = (var.array() + T(kEpsilon)).rsqrt().matrix();
    c.xhat = c.inv_std.asDiagonal() * centered;
    Matrix<T> y = (c.xhat.array().rowwise() * p.row(gamma).array()).matrix();
    y.rowwise() += p.row(beta);
    return y;
  }

  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Cache<T>& c, const Matrix<T>& dy,
                     ParameterBuffer<T>& g) const {
    g.row(gamma) += (dy.array() * c.xhat.array()).colwise().sum().matrix();
    g.row(beta) += dy.colwise().sum();
    const Matrix<T> dxhat = (dy.array().rowwise() * p.row(gamma).array()).matrix();
    const ColVector<T> mean_d = dxhat.rowwise().mean();
    const ColVector<T> mean_dx = (dxhat.array() * c.xhat.array()).rowwise().mean().matrix();
    Matrix<T> dx = dxhat.colwise() - mean_d;
    dx -= (c.xhat.array().colwise() * mean_dx.array()).matrix();
    return c.inv_std.asDiagonal() * dx;
  }
};

template <typename T>
Matrix<T> gelu(const Matrix<T>& x) {
  return x.unaryExpr([](T v) { return T(0.5) * v * (T(1) + std::erf(v / std::sqrt(T(2)))); });
}

template <typename T>
Matrix<T> gelu_backward(const Matrix<T>& x, const Matrix<T>& dy) {
  const T inv_sqrt2pi = T(0.3989422804014327);
  Matrix<T> d = x.unaryExpr([inv_sqrt2pi](T v) {
    const T cdf = T(0.5) * (T(1) + std::erf(v / std::sqrt(T(2))));
    return cdf + v * inv_sqrt2pi * std::exp(T(-0.5) * v * v);
  });
  return (d.array() * dy.array()).matrix();
}

template <typename T>
Matrix<T> relu(const Matrix<T>& x) {
  return x.cwiseMax(T(0));
}

template <typename T>
Matrix<T> relu_backward(const Matrix<T>& x, const Matrix<T>& dy) {
  return (x.array() > T(0)).select(dy, T(0));
}

// Multi-head scaled dot-product attention without masking.
struct Attention {
  Linear query;
  Linear key;
  Linear value;
  Linear output;
  int heads = 1;
  int dim = 0;

  template <typename T>
  struct Cache {
    Matrix<T> q_in;
    Matrix<T> kv_in;
    Matrix<T> q;
    Matrix<T> k;
    Matrix<T> v;
    Matrix<T> concat;
    std::vector<Matrix<T>> probs;
  };

  static Attention create(ParameterLayout& layout, const std::string& name, int dim, int heads) {
    Attention a;
    a.dim = dim;
    a.heads = heads;
    a.query = Linear::create(layout, name + ".q", dim, dim);
    a.key = Linear::create(layout, name + ".k", dim, dim);
    a.value = Linear::create(layout, name + ".v", dim, dim);
    a.output = Linear::create(layout, name + ".out", dim, dim);
    return a;
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& q_in, const Matrix<T>& kv_in,
                    Cache<T>& c) const {
    c.q_in = q_in;
    c.kv_in = kv_in;
    c.q = query.forward(p, q_in);
    c.k = key.forward(p, kv_in);
    c.v = value.forward(p, kv_in);
    const int dh = dim / heads;
    const T scale = T(1) / std::sqrt(T(dh));
    c.concat.resize(q_in.rows(), dim);
    c.probs.resize(heads);
    for (int h = 0; h < heads; ++h) {
      Matrix<T> s = (c.q.middleCols(h * dh, dh) * c.k.middleCols(h * dh, dh).transpose()) * scale;
      const ColVector<T> row_max = s.rowwise().maxCoeff();
      s = (s.colwise() - row_max).array().exp().matrix();
      const ColVector<T> row_sum = s.rowwise().sum();
      s = row_sum.cwiseInverse().asDiagonal() * s;
      c.concat.middleCols(h * dh, dh).noalias() = s * c.v.middleCols(h * dh, dh);
      c.probs[h] = std::move(s);
    }
    return output.forward(p, c.concat);
  }

  // Writes dL/d(q_in) and dL/d(kv_in).
  template <typename T>
  void backward(const ParameterBuffer<T>& p, const Cache<T>& c, const Matrix<T>& dy, ParameterBuffer<T>& g,
                Matrix<T>& dq_in, Matrix<T>& dkv_in) const {
    const Matrix<T> dconcat = output.backward(p, c.concat, dy, g);
    const int dh = dim / heads;
    const T scale = T(1) / std::sqrt(T(dh));
    Matrix<T> dq(c.q.rows(), dim);
    Matrix<T> dk(c.k.rows(), dim);
    Matrix<T> dv(c.v.rows(), dim);
    for (int h = 0; h < heads; ++h) {
      const Matrix<T>& a = c.probs[h];
      const auto d_out = dconcat.middleCols(h * dh, dh);
      const Matrix<T> da = d_out * c.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh).noalias() = a.transpose() * d_out;
      const ColVector<T> dot = (da.array() * a.array()).rowwise().sum().matrix();
      const Matrix<T> ds = (a.array() * (da.colwise() - dot).array()).matrix() * scale;
      dq.middleCols(h * dh, dh).noalias() = ds * c.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh).noalias() = ds.transpose() * c.q.middleCols(h * dh, dh);
    }
    dq_in = query.backward(p, c.q_in, dq, g);
    dkv_in = key.backward(p, c.kv_in, dk, g);
    dkv_in += value.backward(p, c.kv_in, dv, g);
  }
};

struct FeedForward {
  Linear fc1;
  Linear fc2;

  template <typename T>
  struct Cache {
    Matrix<T> x;
    Matrix<T> hidden;
    Matrix<T> activated;
  };

  static FeedForward create(ParameterLayout& layout, const std::string& name, int dim, int hidden) {
    return {Linear::create(layout, name + ".fc1", dim, hidden),
            Linear::create(layout, name + ".fc2", hidden, dim)};
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& x, Cache<T>& c) const {
    c.x = x;
    c.hidden = fc1.forward(p, x);
    c.activated = gelu(c.hidden);
    return fc2.forward(p, c.activated);
  }

  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Cache<T>& c, const Matrix<T>& dy,
                     ParameterBuffer<T>& g) const {
    const Matrix<T> da = fc2.backward(p, c.activated, dy, g);
    return fc1.backward(p, c.x, gelu_backward(c.hidden, da), g);
  }
};

// Pre-LN encoder layer: x + MHA(LN(x)), then + FFN(LN(.)).
struct EncoderLayer {
  LayerNorm ln1;
  Attention attention;
  LayerNorm ln2;
  FeedForward ffn;

  template <typename T>
  struct Cache {
    typename LayerNorm::Cache<T> ln1;
    typename Attention::Cache<T> attention;
    typename LayerNorm::Cache<T> ln2;
    typename FeedForward::Cache<T> ffn;
  };

  static EncoderLayer create(ParameterLayout& layout, const std::string& name, int dim, int heads, int ffn_dim) {
    EncoderLayer e;
    e.ln1 = LayerNorm::create(layout, name + ".ln1", dim);
    e.attention = Attention::create(layout, name + ".attn", dim, heads);
    e.ln2 = LayerNorm::create(layout, name + ".ln2", dim);
    e.ffn = FeedForward::create(layout, name + ".ffn", dim, ffn_dim);
    return e;
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& x, Cache<T>& c) const {
    const Matrix<T> n1 = ln1.forward(p, x, c.ln1);
    Matrix<T> h = x + attention.forward(p, n1, n1, c.attention);
    const Matrix<T> n2 = ln2.forward(p, h, c.ln2);
    h += ffn.forward(p, n2, c.ffn);
    return h;
  }

  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Cache<T>& c, const Matrix<T>& dy,
                     ParameterBuffer<T>& g) const {
    Matrix<T> dh = dy + ln2.backward(p, c.ln2, ffn.backward(p, c.ffn, dy, g), g);
    Matrix<T> dq;
    Matrix<T> dkv;
    attention.backward(p, c.attention, dh, g, dq, dkv);
    dq += dkv;
    return dh + ln1.backward(p, c.ln1, dq, g);
  }
};

// Pre-LN decoder layer: self-attention, cross-attention to the encoder
// output, feed-forward; each with a residual connection. No causal mask.
struct DecoderLayer {
  LayerNorm ln1;
  Attention self_attention;
  LayerNorm ln2;
  Attention cross_attention;
  LayerNorm ln3;
  FeedForward ffn;

  template <typename T>
  struct Cache {
    typename LayerNorm::Cache<T> ln1;
    typename Attention::Cache<T> self_attention;
    typename LayerNorm::Cache<T> ln2;
    typename Attention::Cache<T> cross_attention;
    typename LayerNorm::Cache<T> ln3;
    typename FeedForward::Cache<T> ffn;
  };

  static DecoderLayer create(ParameterLayout& layout, const std::string& name, int dim, int heads, int ffn_dim) {
    DecoderLayer d;
    d.ln1 = LayerNorm::create(layout, name + ".ln1", dim);
    d.self_attention = Attention::create(layout, name + ".self_attn", dim, heads);
    d.ln2 = LayerNorm::create(layout, name + ".ln2", dim);
    d.cross_attention = Attention::create(layout, name + ".cross_attn", dim, heads);
    d.ln3 = LayerNorm::create(layout, name + ".ln3", dim);
    d.ffn = FeedForward::create(layout, name + ".ffn", dim, ffn_dim);
    return d;
  }

  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& y, const Matrix<T>& memory,
                    Cache<T>& c) const {
    const Matrix<T> n1 = ln1.forward(p, y, c.ln1);
    Matrix<T> h = y + self_attention.forward(p, n1, n1, c.self_attention);
    const Matrix<T> n2 = ln2.forward(p, h, c.ln2);
    h += cross_attention.forward(p, n2, memory, c.cross_attention);
    const Matrix<T> n3 = ln3.forward(p, h, c.ln3);
    h += ffn.forward(p, n3, c.ffn);
    return h;
  }

  // Returns dL/dy and accumulates dL/dmemory into `dmemory`.
  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Cache<T>& c, const Matrix<T>& dout,
                     ParameterBuffer<T>& g, Matrix<T>& dmemory) const {
    Matrix<T> dh = dout + ln3.backward(p, c.ln3, ffn.backward(p, c.ffn, dout, g), g);
    Matrix<T> dq;
    Matrix<T> dmem;
    cross_attention.backward(p, c.cross_attention, dh, g, dq, dmem);
    dmemory += dmem;
    dh += ln2.backward(p, c.ln2, dq, g);
    Matrix<T> dkv;
    self_attention.backward(p, c.self_attention, dh, g, dq, dkv);
    dq += dkv;
    return dh + ln1.backward(p, c.ln1, dq, g);
  }
};

// Stride-1 convolution with zero padding kernel / 2, so the output has one
// row per input cell. Images are (H * W) x channels, cells row-major.
struct Conv2d {
  int weight = -1;  // out x (in * k * k), ordered (channel, ky, kx)
  int bias = -1;
  int in = 0;
  int out = 0;
  int kernel = 1;

  static Conv2d create(ParameterLayout& layout, const std::string& name, int in, int out, int kernel) {
    Conv2d c;
    c.in = in;
    c.out = out;
    c.kernel = kernel;
    c.weight = layout.add(name + ".weight", {out, in * kernel * kernel});
    c.bias = layout.add(name + ".bias", {out});
    return c;
  }

  template <typename T>
  Matrix<T> im2col(const Matrix<T>& image, int height, int width) const {
    const int pad = kernel / 2;
    const int kk = kernel * kernel;
    Matrix<T> cols = Matrix<T>::Zero(height * width, in * kk);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const int row = r * width + c;
        for (int ky = 0; ky < kernel; ++ky) {
          const int sr = r + ky - pad;
          if (sr < 0 || sr >= height) continue;
          for (int kx = 0; kx < kernel; ++kx) {
            const int sc = c + kx - pad;
            if (sc < 0 || sc >= width) continue;
            const int src = sr * width + sc;
            for (int ch = 0; ch < in; ++ch) cols(row, ch * kk + ky * kernel + kx) = image(src, ch);
          }
        }
      }
    }
    return cols;
  }

  template <typename T>
  Matrix<T> col2im(const Matrix<T>& cols, int height, int width) const {
    const int pad = kernel / 2;
    const int kk = kernel * kernel;
    Matrix<T> image = Matrix<T>::Zero(height * width, in);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const int row = r * width + c;
        for (int ky = 0; ky < kernel; ++ky) {
          const int sr = r + ky - pad;
          if (sr < 0 || sr >= height) continue;
          for (int kx = 0; kx < kernel; ++kx) {
            const int sc = c + kx - pad;
            if (sc < 0 || sc >= width) continue;
            const int src = sr * width + sc;
            for (int ch = 0; ch < in; ++ch) image(src, ch) += cols(row, ch * kk + ky * kernel + kx);
          }
        }
      }
    }
    return image;
  }

  // `cols` receives the im2col matrix for backward.
  template <typename T>
  Matrix<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& image, int height, int width,
                    Matrix<T>& cols) const {
    cols = im2col(image, height, width);
    Matrix<T> y = cols * p.matrix(weight).transpose();
    y.rowwise() += p.row(bias);
    return y;
  }

  template <typename T>
  void accumulate(const Matrix<T>& cols, const Matrix<T>& dy, ParameterBuffer<T>& g) const {
    g.matrix(weight).noalias() += dy.transpose() * cols;
    g.row(bias) += dy.colwise().sum();
  }

  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Matrix<T>& cols, const Matrix<T>& dy, int height,
                     int width, ParameterBuffer<T>& g) const {
    accumulate(cols, dy, g);
    return col2im(Matrix<T>(dy * p.matrix(weight)), height, width);
  }
};

// LN -> Linear -> GELU -> Linear(1), applied row-wise. Returns one logit per
// row.
struct ScalarHead {
  LayerNorm ln;
  Linear fc1;
  Linear fc2;

  template <typename T>
  struct Cache {
    typename LayerNorm::Cache<T> ln;
    Matrix<T> normed;
    Matrix<T> hidden;
    Matrix<T> activated;
  };

  static ScalarHead create(ParameterLayout& layout, const std::string& name, int dim, int hidden) {
    return {LayerNorm::create(layout, name + ".ln", dim), Linear::create(layout, name + ".fc1", dim, hidden),
            Linear::create(layout, name + ".fc2", hidden, 1)};
  }

  template <typename T>
  ColVector<T> forward(const ParameterBuffer<T>& p, const Matrix<T>& x, Cache<T>& c) const {
    c.normed = ln.forward(p, x, c.ln);
    c.hidden = fc1.forward(p, c.normed);
    c.activated = gelu(c.hidden);
    return fc2.forward(p, c.activated).col(0);
  }

  template <typename T>
  Matrix<T> backward(const ParameterBuffer<T>& p, const Cache<T>& c, const ColVector<T>& dlogit,
                     ParameterBuffer<T>& g) const {
    const Matrix<T> dy = dlogit;
    const Matrix<T> da = fc2.backward(p, c.activated, dy, g);
    const Matrix<T> dn = fc1.backward(p, c.normed, gelu_backward(c.hidden, da), g);
    return ln.backward(p, c.ln, dn, g);
  }
};

// Linear resampling of rows: output row i = sum_t weight[i][t] * input
// row source[i][t]. Endpoints are aligned, so resampling to the same size
// is the identity and corners map to corners.
struct Resampler {
  int source_rows = 0;
  std::vector<std::array<int, 4>> source;
  std::vector<std::array<double, 4>> weight;

  int rows() const { return static_cast<int>(source.size()); }

  // Bilinear resampling of an (h0 x w0) grid to (h x w).
  static Resampler bilinear(int h0, int w0, int h, int w);
  // Linear resampling of a sequence of n0 rows to n rows.
  static Resampler linear(int n0, int n);

  template <typename Derived>
  Matrix<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& src) const {
    using T = typename Derived::Scalar;
    Matrix<T> out = Matrix<T>::Zero(rows(), src.cols());
    for (int i = 0; i < rows(); ++i) {
      for (int t = 0; t < 4; ++t) {
        if (weight[i][t] != 0.0) out.row(i) += T(weight[i][t]) * src.row(source[i][t]);
      }
    }
    return out;
  }

  // Scatters output gradients back onto the source rows (accumulating).
  template <typename T, typename Dst>
  void backward(const Matrix<T>& dout, Dst&& dsrc) const {
    for (int i = 0; i < rows(); ++i) {
      for (int t = 0; t < 4; ++t) {
        if (weight[i][t] != 0.0) dsrc.row(source[i][t]) += T(weight[i][t]) * dout.row(i);
      }
    }
  }
};

}  // namespace alphavit::neural
