#pragma once

#include "nlwave/nonlinearity.hpp"
#include "nlwave/solver.hpp"

#include <vector>

namespace nlwave {

class EnergyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Components of the conserved functional. Nonzero modes carry the weight
/// w_k = |xi_k|^{-2} g_hat(xi_k)^{-1}; the zero mode has weight 1.
struct EnergyBreakdown {
  double kinetic = 0.0;       // sum_{k!=0} w_k |v_k|^2 (2L)^n
  double dispersive_a = 0.0;  // sum_{k!=0} a_hat/g_hat |u_k|^2 (2L)^n
  double dispersive_A = 0.0;  // sum_{k!=0} w_k <A_hat u_k, u_k> (2L)^n
  double zero_mode = 0.0;     // |v_0|^2 + <A_hat(0) u_0, u_0>
  double potential = 0.0;     // 2 int G(u) dx
  double correction = 0.0;    // accumulated zero-mode work, 0 unless monitored

  // literal quantities, reported but not part of the total
  double g_conv_u_sq = 0.0;   // ||g * u||^2
  double B_A_u_sq = 0.0;      // ||B (A * u)||^2

  double total() const {
    return kinetic + dispersive_a + dispersive_A + zero_mode + potential;
  }
  double corrected() const { return total() - correction; }
};

/// Multiplier |xi|^{-1} g_hat^{-1/2} on nonzero modes; the zero mode maps
/// to 0.
Field b_apply(const SymbolTable &table, const Field &spectral);

/// (2L)^n / M^n sum_j Re G(u_j)
double potential_G(const NonlinearitySpec &f, const Field &u);

EnergyBreakdown energy_total(const State &state, const SymbolTable &table,
                             const NonlinearitySpec &f);

struct EnergySample {
  double t = 0.0;
  EnergyBreakdown energy;
};

/// Observer for solve_ivp that records the energy after each window and
/// accumulates the zero-mode work 2 (2L)^n int Re<f_hat(u)_0, v_0> dt with
/// the solver's node quadrature.
class ConservationMonitor {
public:
  ConservationMonitor(const SymbolTable &table, const NonlinearitySpec &f,
                      Quadrature quad);

  void record(const Observation &obs);
  Observer observer() {
    return [this](const Observation &obs) { record(obs); };
  }

  const std::vector<EnergySample> &series() const { return series_; }
  double correction() const { return correction_; }
  /// max_t |E_corrected(t) - E_corrected(0)| / |E_corrected(0)|
  double max_relative_drift() const;

private:
  const SymbolTable &table_;
  const NonlinearitySpec &f_;
  Quadrature quad_;
  double correction_ = 0.0;
  std::vector<EnergySample> series_;
};

struct GlobalExistenceReport {
  bool passed = true;
  double worst_margin = 0.0;  // min of G(sigma) + k sigma^2
  double worst_sigma = 0.0;
};

/// Samples G on [-sigma_max, sigma_max] along each fiber axis and the
/// diagonal direction and tests G(sigma) >= -k sigma^2.
GlobalExistenceReport global_existence_check(const NonlinearitySpec &f,
                                             double k, double sigma_max,
                                             std::size_t samples = 10000);

struct EnergyInequalityReport {
  // quadratic energy at t versus E(0) + 2k ||u(t)||^2
  double quadratic = 0.0;
  double bound = 0.0;
  // weighted velocity norm versus C_g^{-1} sum (1+|xi|^2)^{r/2-1} |v_k|^2
  double velocity_weighted = 0.0;
  double velocity_sobolev = 0.0;
};

EnergyInequalityReport energy_inequality_report(const State &state,
                                                const SymbolTable &table,
                                                double initial_energy, double k,
                                                double r, double C_g);

} // namespace nlwave
