#pragma once

// Reference computations used as independent checks. Nothing here calls the
// transform, propagator or solver code under test.

#include "nlwave/spectral_grid.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using nlwave::Complex;
using nlwave::Grid;

/// Direct O(size^2) evaluation of u_hat_k = M^{-n} sum_j u_j e^{-i xi_k x_j}.
inline std::vector<Complex> direct_dft(const Grid &g, const std::vector<Complex> &u) {
  const std::size_t n = g.fiber();
  std::vector<Complex> out(g.value_count());
  const double h = g.spacing();
  const double dk = std::numbers::pi / g.half_period();
  const std::size_t m = g.samples();
  for (std::size_t k = 0; k < g.size(); ++k) {
    int k0, k1 = 0;
    std::size_t j0k = g.dim() == 1 ? k : k / m, j1k = g.dim() == 1 ? 0 : k % m;
    k0 = j0k < m / 2 ? int(j0k) : int(j0k) - int(m);
    if (g.dim() == 2) k1 = j1k < m / 2 ? int(j1k) : int(j1k) - int(m);
    for (std::size_t j = 0; j < g.size(); ++j) {
      double x0 = g.dim() == 1 ? h * double(j) : h * double(j / m);
      double x1 = g.dim() == 1 ? 0.0 : h * double(j % m);
      double phase = -dk * (k0 * x0 + k1 * x1);
      Complex e(std::cos(phase), std::sin(phase));
      for (std::size_t c = 0; c < n; ++c) out[k * n + c] += u[j * n + c] * e;
    }
  }
  for (auto &c : out) c /= double(g.size());
  return out;
}

inline std::vector<Complex> random_values(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> out(count);
  for (auto &c : out) c = {normal(rng), normal(rng)};
  return out;
}

inline double max_abs_diff(const std::vector<Complex> &a, std::span<const Complex> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_abs(std::span<const Complex> a) {
  double worst = 0.0;
  for (const auto &c : a) worst = std::max(worst, std::abs(c));
  return worst;
}

/// int_0^t sin(eta (t - tau)) / eta dtau for constant unit forcing
inline double forced_displacement(double eta, double t) {
  if (eta == 0.0) return 0.5 * t * t;
  return (1.0 - std::cos(eta * t)) / (eta * eta);
}

/// int_0^t cos(eta (t - tau)) dtau
inline double forced_velocity(double eta, double t) {
  if (eta == 0.0) return t;
  return std::sin(eta * t) / eta;
}

/// log2(e_coarse / e_fine) for a halving of the step
inline double observed_order(double coarse, double fine) {
  return std::log2(coarse / fine);
}

} // namespace oracle
