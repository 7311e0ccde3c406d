#pragma once

#include "nlwave/symbols.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nlwave {

/// cos(eta t)
double cosine_factor(double eta, double t);
/// sin(eta t) / eta, continued by t at eta = 0
double sine_factor(double eta, double t);

Field cosine_apply(const SymbolTable &table, double t, const Field &spectral);
Field sine_apply(const SymbolTable &table, double t, const Field &spectral);

/// Exact evolution of u_tt + eta^2 u = 0 over dt (dt may be negative).
/// The result keeps the representation of the input.
State linear_homogeneous_solve(const State &state, double dt,
                               const SymbolTable &table);

struct Quadrature {
  enum class Rule { trapezoid, simpson };
  Rule rule = Rule::trapezoid;
  std::size_t nodes = 9;

  /// Throws std::invalid_argument for P < 2, or even/short P with simpson.
  void validate() const;
  /// Nominal convergence order in the node spacing.
  int order() const { return rule == Rule::trapezoid ? 2 : 4; }
};

const char *to_string(Quadrature::Rule rule);
Quadrature::Rule parse_quadrature_rule(const std::string &name);

/// Weights for the integral from node 0 to node i of equally spaced nodes
/// 0..P-1 with spacing h; row i may reference nodes up to max(i, 2).
///
/// The last row is the composite rule over the whole span. Simpson rows with
/// odd i >= 3 end with a 3/8 panel; row 1 uses the quadratic through nodes
/// 0, 1, 2.
std::vector<std::vector<double>> cumulative_weights(const Quadrature &quad,
                                                    double h);

/// Spectral forcing sampled at absolute times.
using ForcingSampler = std::function<Field(double)>;

/// Homogeneous evolution plus the quadrature of
///   int_t^{t+dt} S(dt - (tau - t)) F(tau) dtau
/// (and the matching cosine integral for the velocity row).
State duhamel_forced_solve(const State &state, const ForcingSampler &forcing,
                           double dt, const SymbolTable &table,
                           const Quadrature &quad);

/// Per-mode cos/sin factors at integer multiples of a node spacing,
/// evaluated in the eigenbasis of the table.
class LagFactors {
public:
  LagFactors(const SymbolTable &table, double spacing, int min_lag, int max_lag);

  double cosine(std::size_t mode, std::size_t j, int lag) const {
    return cos_[index(mode, j, lag)];
  }
  double sine(std::size_t mode, std::size_t j, int lag) const {
    return sin_[index(mode, j, lag)];
  }
  double eta_sq(std::size_t mode, std::size_t j) const {
    return eta_sq_[mode * fiber_ + j];
  }

private:
  std::size_t index(std::size_t mode, std::size_t j, int lag) const {
    return (mode * fiber_ + j) * lags_ + std::size_t(lag - min_lag_);
  }

  std::size_t fiber_;
  int min_lag_;
  std::size_t lags_;
  std::vector<double> cos_, sin_, eta_sq_;
};

/// Value at node i of the windowed Duhamel formula in eigenbasis
/// coordinates: homogeneous evolution of (u0, v0) over lag i plus
/// sum_j weights[j] * [S; C](lag i - j) forcing[j].
void evolve_to_node(const LagFactors &factors, int node, const Field &u0,
                    const Field &v0, std::span<const Field> forcing,
                    std::span<const double> weights, Field &u_out,
                    Field &v_out);

struct EstimateReport {
  double eta_u = 0.0;        // sup + H^s of eta u(t)
  double eta_ut = 0.0;       // sup + H^s of eta u_t(t)
  double eta_sq_phi = 0.0;   // sup + H^s of eta^2 phi
  double eta_psi = 0.0;      // sup + H^s of eta psi
  double forcing = 0.0;      // int_0^t (sup + H^s) of the forcing
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Left and right sides of the linear a priori estimate after evolving the
/// data over t. `forcing` may be empty.
EstimateReport linear_estimate_diagnostic(const State &initial,
                                          const ForcingSampler &forcing,
                                          double t, const SymbolTable &table,
                                          double s,
                                          const Quadrature &quad = {});

} // namespace nlwave
