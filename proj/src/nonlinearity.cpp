#include "nlwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlwave {

namespace {

// |c| m!/(m-k)! sigma^{m-k}, maximized over k = 1..order
double power_envelope(double coefficient, int exponent, int order, double sigma) {
  double best = 0.0;
  double falling = 1.0;
  for (int k = 1; k <= std::min(order, exponent); ++k) {
    falling *= double(exponent - k + 1);
    best = std::max(best, std::abs(coefficient) * falling *
                              std::pow(sigma, double(exponent - k)));
  }
  return best;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

} // namespace

void NonlinearitySpec::validate() const {
  if (fiber < 1) throw NonlinearityError("nonlinearity fiber must be >= 1");
  if (derivative_order < 1)
    throw NonlinearityError("nonlinearity derivative order must be >= 1");
  if (is_zero()) return;
  std::vector<Complex> zero(fiber), out(fiber);
  f(zero, out);
  for (const auto &c : out)
    if (std::abs(c) > 1e-14)
      throw NonlinearityError("nonlinearity '" + name + "' violates f(0) = 0");
}

namespace presets {

NonlinearitySpec no_nonlinearity(std::size_t fiber) {
  NonlinearitySpec s;
  s.name = "none";
  s.fiber = fiber;
  s.potential = [](std::span<const Complex>) { return Complex(0.0); };
  s.envelope = [](double) { return 0.0; };
  return s;
}

NonlinearitySpec power(std::size_t fiber, double coefficient, int exponent,
                       int derivative_order) {
  if (exponent < 1) throw NonlinearityError("power exponent must be >= 1");
  NonlinearitySpec s;
  s.name = "power";
  s.fiber = fiber;
  s.alpha = double(exponent - 1);
  s.derivative_order = derivative_order;
  s.f = [coefficient, exponent](std::span<const Complex> u, std::span<Complex> out) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      Complex p = u[j];
      for (int i = 1; i < exponent; ++i) p *= u[j];
      out[j] = coefficient * p;
    }
  };
  s.potential = [coefficient, exponent](std::span<const Complex> u) {
    Complex sum = 0.0;
    for (const auto &x : u) {
      Complex p = x;
      for (int i = 0; i < exponent; ++i) p *= x;
      sum += p;
    }
    return coefficient * sum / double(exponent + 1);
  };
  s.envelope = [coefficient, exponent, derivative_order](double sigma) {
    return power_envelope(coefficient, exponent, derivative_order, sigma);
  };
  return s;
}

NonlinearitySpec signed_power(std::size_t fiber, double coefficient,
                              int exponent, int derivative_order) {
  if (exponent < 1) throw NonlinearityError("power exponent must be >= 1");
  NonlinearitySpec s;
  s.name = "signed-power";
  s.fiber = fiber;
  s.alpha = double(exponent - 1);
  s.derivative_order = derivative_order;
  s.f = [coefficient, exponent](std::span<const Complex> u, std::span<Complex> out) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      double x = u[j].real();
      out[j] = coefficient * x * std::pow(std::abs(x), double(exponent - 1));
    }
  };
  s.potential = [coefficient, exponent](std::span<const Complex> u) {
    double sum = 0.0;
    for (const auto &x : u) sum += std::pow(std::abs(x.real()), double(exponent + 1));
    return Complex(coefficient * sum / double(exponent + 1));
  };
  s.envelope = [coefficient, exponent, derivative_order](double sigma) {
    return power_envelope(coefficient, exponent, derivative_order, sigma);
  };
  return s;
}

} // namespace presets

Field nonlinear_term(const Field &u, const NonlinearitySpec &spec) {
  Field phys = to_physical(u);
  if (spec.fiber != phys.grid().fiber())
    throw NonlinearityError("nonlinearity fiber does not match the grid");
  Field out = phys.zeros_like();
  if (spec.is_zero()) return forward_transform(out);
  for (std::size_t j = 0; j < phys.grid().size(); ++j) {
    spec.f(phys.at(j), out.at(j));
    for (const auto &c : out.at(j))
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw NonlinearityError("nonlinearity '" + spec.name +
                                "' produced a non-finite value");
  }
  return forward_transform(out);
}

Field nonlinear_rhs(const Field &u, const NonlinearitySpec &spec,
                    const SymbolTable &table) {
  require_same_grid(table.grid(), u.grid(), "nonlinear_rhs");
  Field out = nonlinear_term(u, spec);
  for (std::size_t k = 0; k < table.grid().size(); ++k) {
    double m = -table.xi_sq(k) * table.g(k);
    for (auto &c : out.at(k)) c *= m;
  }
  for (auto &c : out.at(table.grid().zero_mode())) c = 0.0;
  return out;
}

EnvelopeValue fbar_eval(const NonlinearitySpec &spec, double sigma) {
  if (sigma < 0.0) throw NonlinearityError("fbar_eval needs sigma >= 0");
  if (spec.is_zero()) return {0.0, false};
  if (spec.envelope) return {spec.envelope(sigma), false};
  return {sampled_envelope(spec, sigma), true};
}

double sampled_envelope(const NonlinearitySpec &spec, double sigma,
                        std::size_t samples) {
  if (spec.is_zero()) return 0.0;
  const std::size_t n = spec.fiber;
  std::mt19937_64 rng(0x6e6c77617665ULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  const double h = 1e-2 * std::max(sigma, 1.0);

  auto random_unit = [&] {
    std::vector<double> d(n);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto &x : d) {
        x = normal(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    for (auto &x : d) x /= std::sqrt(norm);
    return d;
  };

  std::vector<Complex> point(n), value(n), accum(n);
  double best = 0.0;
  for (std::size_t sample = 0; sample < samples; ++sample) {
    auto center_dir = random_unit();
    auto dir = random_unit();
    double radius = sigma * uniform(rng);
    for (int order = 1; order <= spec.derivative_order; ++order) {
      std::fill(accum.begin(), accum.end(), Complex(0.0));
      for (int i = 0; i <= order; ++i) {
        double offset = (0.5 * order - i) * h;
        for (std::size_t j = 0; j < n; ++j)
          point[j] = radius * center_dir[j] + offset * dir[j];
        spec.f(point, value);
        double w = (i % 2 == 0 ? 1.0 : -1.0) * binomial(order, i);
        for (std::size_t j = 0; j < n; ++j) accum[j] += w * value[j];
      }
      double norm = 0.0;
      for (const auto &c : accum) norm += std::norm(c);
      best = std::max(best, std::sqrt(norm) / std::pow(h, order));
    }
  }
  return best;
}

} // namespace nlwave
