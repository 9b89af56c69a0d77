#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "alphavit/features.hpp"
#include "alphavit/neural/network.hpp"

namespace oracle {

struct GradientCheck {
  double max_relative_error = 0.0;
  int checked = 0;
  std::string worst;  // parameter array holding the worst entry
};

// Compares Network<double>::backward against central finite differences of
// the scalar a * v + sum_i b_i * p_i with random coefficients, on `samples`
// randomly chosen trainable scalars.
inline GradientCheck check_gradients(alphavit::neural::Network<double>& net, const alphavit::FeatureStack& f,
                                     const alphavit::GameId& id, int samples, std::uint64_t seed,
                                     double h = 1e-5) {
  using namespace alphavit::neural;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Tape<double> tape;
  const NetworkOutput<double> out = net.forward(f, id, tape);
  std::vector<double> b(out.policy.size());
  for (auto& x : b) x = normal(rng);
  const double a = normal(rng);
  auto grads = net.make_buffer();
  net.backward(tape, a, b, grads);

  auto objective = [&]() {
    const NetworkOutput<double> o = net.forward(f, id);
    double s = a * o.value;
    for (std::size_t i = 0; i < b.size(); ++i) s += b[i] * o.policy[i];
    return s;
  };

  std::vector<std::size_t> trainable;
  for (const auto& spec : net.layout().specs()) {
    if (!spec.trainable) continue;
    for (std::size_t k = 0; k < spec.size(); ++k) trainable.push_back(spec.offset + k);
  }
  std::shuffle(trainable.begin(), trainable.end(), rng);
  trainable.resize(std::min<std::size_t>(trainable.size(), samples));

  GradientCheck result;
  auto& values = net.params().values();
  for (std::size_t i : trainable) {
    const double old = values[i];
    values[i] = old + h;
    const double up = objective();
    values[i] = old - h;
    const double down = objective();
    values[i] = old;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = grads.values()[i];
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    const double rel = std::abs(numeric - analytic) / denom;
    if (rel > result.max_relative_error) {
      result.max_relative_error = rel;
      for (const auto& spec : net.layout().specs()) {
        if (spec.offset <= i && i < spec.offset + spec.size()) result.worst = spec.name;
      }
    }
    ++result.checked;
  }
  return result;
}

// Adds Gaussian noise to every weight so activations leave the symmetric
// initial regime (the static game one-hots are left alone).
inline void perturb(alphavit::neural::Network<double>& net, std::uint64_t seed, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (const auto& spec : net.layout().specs()) {
    if (!spec.trainable) continue;
    double* p = net.params().values().data() + spec.offset;
    for (std::size_t k = 0; k < spec.size(); ++k) p[k] += normal(rng);
  }
}

}  // namespace oracle
