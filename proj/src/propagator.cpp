#include "nlwave/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwave {

double cosine_factor(double eta, double t) { return std::cos(eta * t); }

double sine_factor(double eta, double t) {
  double z = eta * t;
  if (z == 0.0) return t;
  if (std::abs(z) < 1e-8) return t * (1.0 - z * z / 6.0);
  return std::sin(z) / eta;
}

namespace {

template <class Scale>
Field scale_in_eigenbasis(const SymbolTable &table, const Field &spectral,
                          Scale scale) {
  require_same_grid(table.grid(), spectral.grid(), "propagator");
  if (spectral.representation() != Representation::spectral)
    throw GridError("propagator expects a spectral field");
  Field e = table.to_eigenbasis(spectral);
  const std::size_t n = table.grid().fiber();
  for (std::size_t k = 0; k < table.grid().size(); ++k) {
    auto eta = table.eta(k);
    auto w = e.at(k);
    for (std::size_t j = 0; j < n; ++j) w[j] *= scale(eta[j]);
  }
  return table.from_eigenbasis(e);
}

} // namespace

Field cosine_apply(const SymbolTable &table, double t, const Field &spectral) {
  return scale_in_eigenbasis(table, spectral,
                             [t](double eta) { return cosine_factor(eta, t); });
}

Field sine_apply(const SymbolTable &table, double t, const Field &spectral) {
  return scale_in_eigenbasis(table, spectral,
                             [t](double eta) { return sine_factor(eta, t); });
}

State linear_homogeneous_solve(const State &state, double dt,
                               const SymbolTable &table) {
  state.validate();
  require_same_grid(table.grid(), state.grid(), "linear_homogeneous_solve");
  if (!std::isfinite(dt)) throw std::invalid_argument("dt must be finite");
  const bool physical = state.u.representation() == Representation::physical;
  Field u = table.to_eigenbasis(to_spectral(state.u));
  Field v = table.to_eigenbasis(to_spectral(state.v));
  const std::size_t n = table.grid().fiber();
  for (std::size_t k = 0; k < table.grid().size(); ++k) {
    auto eta = table.eta(k);
    auto uk = u.at(k);
    auto vk = v.at(k);
    for (std::size_t j = 0; j < n; ++j) {
      double c = cosine_factor(eta[j], dt);
      double s = sine_factor(eta[j], dt);
      Complex u0 = uk[j], v0 = vk[j];
      uk[j] = c * u0 + s * v0;
      vk[j] = -eta[j] * eta[j] * s * u0 + c * v0;
    }
  }
  State out{table.from_eigenbasis(u), table.from_eigenbasis(v)};
  out.set_time(state.time() + dt);
  return physical ? to_physical(out) : out;
}

void Quadrature::validate() const {
  if (nodes < 2) throw std::invalid_argument("quadrature needs at least 2 nodes");
  if (rule == Rule::simpson && (nodes < 3 || nodes % 2 == 0))
    throw std::invalid_argument("simpson quadrature needs an odd node count >= 3");
}

const char *to_string(Quadrature::Rule rule) {
  return rule == Quadrature::Rule::trapezoid ? "trapezoid" : "simpson";
}

Quadrature::Rule parse_quadrature_rule(const std::string &name) {
  if (name == "trapezoid") return Quadrature::Rule::trapezoid;
  if (name == "simpson") return Quadrature::Rule::simpson;
  throw std::invalid_argument("unknown quadrature rule '" + name + "'");
}

std::vector<std::vector<double>> cumulative_weights(const Quadrature &quad,
                                                    double h) {
  quad.validate();
  const std::size_t p = quad.nodes;
  std::vector<std::vector<double>> rows(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 1; i < p; ++i) {
    auto &w = rows[i];
    if (quad.rule == Quadrature::Rule::trapezoid) {
      for (std::size_t j = 0; j < i; ++j) {
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
      }
      continue;
    }
    if (i == 1) {
      w[0] = 5.0 * h / 12.0;
      w[1] = 8.0 * h / 12.0;
      w[2] = -h / 12.0;
      continue;
    }
    std::size_t simpson_end = i % 2 == 0 ? i : i - 3;
    for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
      w[j] += h / 3.0;
      w[j + 1] += 4.0 * h / 3.0;
      w[j + 2] += h / 3.0;
    }
    if (i % 2 == 1) {
      w[i - 3] += 3.0 * h / 8.0;
      w[i - 2] += 9.0 * h / 8.0;
      w[i - 1] += 9.0 * h / 8.0;
      w[i] += 3.0 * h / 8.0;
    }
  }
  return rows;
}

LagFactors::LagFactors(const SymbolTable &table, double spacing, int min_lag,
                       int max_lag)
    : fiber_(table.grid().fiber()), min_lag_(min_lag),
      lags_(std::size_t(max_lag - min_lag + 1)) {
  const std::size_t modes = table.grid().size();
  cos_.resize(modes * fiber_ * lags_);
  sin_.resize(modes * fiber_ * lags_);
  eta_sq_.resize(modes * fiber_);
  for (std::size_t k = 0; k < modes; ++k) {
    auto eta = table.eta(k);
    for (std::size_t j = 0; j < fiber_; ++j) {
      eta_sq_[k * fiber_ + j] = eta[j] * eta[j];
      for (int lag = min_lag; lag <= max_lag; ++lag) {
        double t = spacing * double(lag);
        cos_[index(k, j, lag)] = cosine_factor(eta[j], t);
        sin_[index(k, j, lag)] = sine_factor(eta[j], t);
      }
    }
  }
}

void evolve_to_node(const LagFactors &factors, int node, const Field &u0,
                    const Field &v0, std::span<const Field> forcing,
                    std::span<const double> weights, Field &u_out,
                    Field &v_out) {
  const Grid &grid = u0.grid();
  const std::size_t n = grid.fiber();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto a = u0.at(k);
    auto b = v0.at(k);
    auto uo = u_out.at(k);
    auto vo = v_out.at(k);
    for (std::size_t j = 0; j < n; ++j) {
      double c = factors.cosine(k, j, node);
      double s = factors.sine(k, j, node);
      Complex u = c * a[j] + s * b[j];
      Complex v = -factors.eta_sq(k, j) * s * a[j] + c * b[j];
      for (std::size_t m = 0; m < forcing.size(); ++m) {
        if (weights[m] == 0.0) continue;
        int lag = node - int(m);
        Complex f = forcing[m].at(k)[j];
        u += weights[m] * factors.sine(k, j, lag) * f;
        v += weights[m] * factors.cosine(k, j, lag) * f;
      }
      uo[j] = u;
      vo[j] = v;
    }
  }
}

State duhamel_forced_solve(const State &state, const ForcingSampler &forcing,
                           double dt, const SymbolTable &table,
                           const Quadrature &quad) {
  quad.validate();
  state.validate();
  require_same_grid(table.grid(), state.grid(), "duhamel_forced_solve");
  if (!forcing) return linear_homogeneous_solve(state, dt, table);

  const bool physical = state.u.representation() == Representation::physical;
  const std::size_t p = quad.nodes;
  const double h = dt / double(p - 1);
  const double t0 = state.time();

  Field u0 = table.to_eigenbasis(to_spectral(state.u));
  Field v0 = table.to_eigenbasis(to_spectral(state.v));
  std::vector<Field> samples;
  samples.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    Field f = forcing(t0 + double(j) * h);
    require_same_grid(table.grid(), f.grid(), "duhamel forcing");
    if (f.representation() != Representation::spectral)
      throw GridError("duhamel forcing must be spectral");
    samples.push_back(table.to_eigenbasis(f));
  }
  auto weights = cumulative_weights(quad, h);
  LagFactors factors(table, h, 0, int(p - 1));
  Field u = u0.zeros_like(), v = v0.zeros_like();
  evolve_to_node(factors, int(p - 1), u0, v0, samples, weights.back(), u, v);

  State out{table.from_eigenbasis(u), table.from_eigenbasis(v)};
  out.set_time(t0 + dt);
  return physical ? to_physical(out) : out;
}

EstimateReport linear_estimate_diagnostic(const State &initial,
                                          const ForcingSampler &forcing,
                                          double t, const SymbolTable &table,
                                          double s, const Quadrature &quad) {
  State data = to_spectral(initial);
  State final_state = forcing ? duhamel_forced_solve(data, forcing, t, table, quad)
                              : linear_homogeneous_solve(data, t, table);
  EstimateReport r;
  r.eta_u = working_norm(eta_apply(table, final_state.u, 1.0), s);
  r.eta_ut = working_norm(eta_apply(table, final_state.v, 1.0), s);
  r.eta_sq_phi = working_norm(eta_apply(table, data.u, 2.0), s);
  r.eta_psi = working_norm(eta_apply(table, data.v, 1.0), s);
  if (forcing) {
    auto weights = cumulative_weights(quad, t / double(quad.nodes - 1)).back();
    for (std::size_t j = 0; j < quad.nodes; ++j)
      r.forcing += weights[j] *
                   working_norm(forcing(data.time() + t * double(j) /
                                                          double(quad.nodes - 1)),
                                s);
  }
  r.lhs = r.eta_u + r.eta_ut;
  r.rhs = r.eta_sq_phi + r.eta_psi + r.forcing;
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

} // namespace nlwave
