#pragma once

#include "nlwave/nonlinearity.hpp"
#include "nlwave/propagator.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlwave {

struct SolverConfig {
  double s = 2.0;                 // Sobolev index of the working norm
  double picard_tol = 1e-10;      // relative increment
  int max_picard_iters = 50;
  Quadrature quad{Quadrature::Rule::trapezoid, 9};
  double C0 = 1.0;
  double C1 = 1.0;
  double blowup_threshold = 1e6;
  std::optional<double> window_override;

  void validate() const;
};

/// Working norms of a state: sup and H^s of u and of u_t.
struct StateNorms {
  double sup_u = 0.0, hs_u = 0.0, sup_ut = 0.0, hs_ut = 0.0;
  double total() const { return sup_u + hs_u + sup_ut + hs_ut; }
};

StateNorms state_norms(const State &state, double s);

enum class WindowStatus { converged, stalled_ratio, stalled_iterations };

struct WindowReport {
  double t_start = 0.0;
  double length = 0.0;
  int iterations = 0;
  WindowStatus status = WindowStatus::converged;
  /// ||u^{m+1} - u^m|| / ||u^m - u^{m-1}|| for m >= 1
  std::vector<double> contraction_ratios;
  /// final relative increment
  double increment = 0.0;
  /// relative residual of the accepted iterate in the integral equation,
  /// max over nodes
  double residual = 0.0;
  /// accepted solution at the window nodes (spectral)
  std::vector<State> nodes;

  double max_contraction() const;
};

struct WindowResult {
  State end;
  WindowReport report;
};

/// min of the two contraction window bounds
///   {(M+1)[1 + 2 C0 (M+1) fbar(M+1)]}^{-1}
///   (1/2)[1 + C1 (M+1)^2 fbar(M+1)]^{-1}
/// or the configured override.
double window_length(double data_norm, const NonlinearitySpec &f,
                     const SolverConfig &config);

/// Picard iteration of the windowed Duhamel map on [t, t+T].
WindowResult picard_window(const State &state, double T,
                           const NonlinearitySpec &f, const SymbolTable &table,
                           const SolverConfig &config);

enum class Outcome { completed, blowup_detected, picard_stalled };

const char *to_string(Outcome outcome);

struct Observation {
  std::size_t index = 0;          // 0 for the initial state
  double t = 0.0;
  const State *state = nullptr;   // spectral
  StateNorms norms;
  const WindowReport *window = nullptr; // null for the initial state
};

using Observer = std::function<void(const Observation &)>;

struct RunStatus {
  Outcome outcome = Outcome::completed;
  double t_reached = 0.0;
  std::vector<int> iterations;
  std::vector<double> contraction_ratios; // max per window
  std::vector<double> window_lengths;
  std::optional<double> t_max;
  double last_norm = 0.0;
  std::optional<State> final_state;
};

/// Continues windowed Picard solutions up to t_final, stopping early when
/// the working norm of (u, u_t) exceeds the blow-up threshold or a window
/// fails to contract.
RunStatus solve_ivp(const State &initial, double t_final,
                    const NonlinearitySpec &f, const SymbolTable &table,
                    const SolverConfig &config, const Observer &observer = {});

} // namespace nlwave
