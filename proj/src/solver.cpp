#include "nlwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlwave {

void SolverConfig::validate() const {
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
  if (max_picard_iters < 1)
    throw std::invalid_argument("max_picard_iters must be >= 1");
  if (quad.nodes < 3) throw std::invalid_argument("nodes_per_window must be >= 3");
  quad.validate();
  if (!(blowup_threshold > 0.0))
    throw std::invalid_argument("blowup_threshold must be > 0");
  if (!(C0 > 0.0) || !(C1 > 0.0))
    throw std::invalid_argument("window constants C0, C1 must be > 0");
  if (window_override && !(*window_override > 0.0))
    throw std::invalid_argument("window_override must be > 0");
}

StateNorms state_norms(const State &state, double s) {
  Field u = to_physical(state.u), v = to_physical(state.v);
  return {sup_norm(u), sobolev_norm(state.u, s), sup_norm(v),
          sobolev_norm(state.v, s)};
}

double WindowReport::max_contraction() const {
  if (contraction_ratios.empty()) return 0.0;
  return *std::max_element(contraction_ratios.begin(), contraction_ratios.end());
}

double window_length(double data_norm, const NonlinearitySpec &f,
                     const SolverConfig &config) {
  if (config.window_override) return *config.window_override;
  if (data_norm < 0.0) throw std::invalid_argument("data norm must be >= 0");
  const double m1 = data_norm + 1.0;
  const double fbar = fbar_eval(f, m1).value;
  double bound_map = 1.0 / (m1 * (1.0 + 2.0 * config.C0 * m1 * fbar));
  double bound_contraction = 0.5 / (1.0 + config.C1 * m1 * m1 * fbar);
  return std::min(bound_map, bound_contraction);
}

namespace {

// Node values in eigenbasis coordinates of the symbol table.
struct NodeSet {
  std::vector<Field> u, v;
};

class WindowSolver {
public:
  WindowSolver(const State &start, double length, const NonlinearitySpec &f,
               const SymbolTable &table, const SolverConfig &config)
      : table_(table), f_(f), config_(config), nodes_(config.quad.nodes),
        length_(length), spacing_(length / double(nodes_ - 1)),
        weights_(cumulative_weights(config.quad, spacing_)),
        factors_(table, spacing_, -1, int(nodes_ - 1)),
        u0_(table.to_eigenbasis(start.u)), v0_(table.to_eigenbasis(start.v)),
        t0_(start.time()) {}

  NodeSet homogeneous() const { return apply({}); }

  /// One application of the windowed Duhamel map.
  NodeSet apply(const std::vector<Field> &forcing) const {
    NodeSet out;
    for (std::size_t i = 0; i < nodes_; ++i) {
      Field u = u0_.zeros_like(), v = v0_.zeros_like();
      if (forcing.empty())
        evolve_to_node(factors_, int(i), u0_, v0_, {}, {}, u, v);
      else
        evolve_to_node(factors_, int(i), u0_, v0_, forcing, weights_[i], u, v);
      out.u.push_back(std::move(u));
      out.v.push_back(std::move(v));
    }
    return out;
  }

  std::vector<Field> forcing(const NodeSet &nodes) const {
    std::vector<Field> out;
    if (f_.is_zero()) return out;
    for (const auto &u : nodes.u)
      out.push_back(table_.to_eigenbasis(
          nonlinear_rhs(inverse_transform(table_.from_eigenbasis(u)), f_, table_)));
    return out;
  }

  double norm(const Field &eigen_field) const {
    return working_norm(table_.from_eigenbasis(eigen_field), config_.s);
  }

  double size(const NodeSet &nodes) const {
    double best = 0.0;
    for (std::size_t i = 0; i < nodes_; ++i)
      best = std::max(best, norm(nodes.u[i]) + norm(nodes.v[i]));
    return best;
  }

  double distance(const NodeSet &a, const NodeSet &b) const {
    double best = 0.0;
    for (std::size_t i = 0; i < nodes_; ++i)
      best = std::max(best, norm(a.u[i] - b.u[i]) + norm(a.v[i] - b.v[i]));
    return best;
  }

  State node_state(const NodeSet &nodes, std::size_t i) const {
    State s{table_.from_eigenbasis(nodes.u[i]), table_.from_eigenbasis(nodes.v[i])};
    s.set_time(i + 1 == nodes_ ? t0_ + length_ : t0_ + spacing_ * double(i));
    return s;
  }

  std::size_t node_count() const { return nodes_; }

private:
  const SymbolTable &table_;
  const NonlinearitySpec &f_;
  const SolverConfig &config_;
  std::size_t nodes_;
  double length_;
  double spacing_;
  std::vector<std::vector<double>> weights_;
  LagFactors factors_;
  Field u0_, v0_;
  double t0_;
};

double relative(double value, double scale) { return scale > 0.0 ? value / scale : 0.0; }

} // namespace

WindowResult picard_window(const State &state, double T,
                           const NonlinearitySpec &f, const SymbolTable &table,
                           const SolverConfig &config) {
  config.validate();
  state.validate();
  require_same_grid(table.grid(), state.grid(), "picard_window");
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("picard window length must be positive");

  const bool physical = state.u.representation() == Representation::physical;
  State start = to_spectral(state);
  WindowSolver solver(start, T, f, table, config);

  WindowReport report;
  report.t_start = start.time();
  report.length = T;

  // increments at the rounding floor count as converged
  const double tol =
      std::max(config.picard_tol, 64.0 * std::numeric_limits<double>::epsilon());
  NodeSet current = solver.homogeneous();
  double previous_increment = -1.0;
  int growing = 0;
  report.status = WindowStatus::stalled_iterations;
  for (int m = 1; m <= config.max_picard_iters; ++m) {
    NodeSet next = solver.apply(solver.forcing(current));
    double increment = solver.distance(next, current);
    double scale = solver.size(next);
    if (previous_increment > 0.0) {
      double ratio = increment / previous_increment;
      report.contraction_ratios.push_back(ratio);
      growing = ratio >= 1.0 ? growing + 1 : 0;
    }
    previous_increment = increment;
    current = std::move(next);
    report.iterations = m;
    report.increment = relative(increment, scale);
    if (report.increment <= tol) {
      report.status = WindowStatus::converged;
      break;
    }
    if (growing >= 3) {
      report.status = WindowStatus::stalled_ratio;
      break;
    }
  }

  if (!f.is_zero()) {
    NodeSet image = solver.apply(solver.forcing(current));
    report.residual = relative(solver.distance(image, current), solver.size(current));
  }

  for (std::size_t i = 0; i < solver.node_count(); ++i)
    report.nodes.push_back(solver.node_state(current, i));
  State end = report.nodes.back();
  return {physical ? to_physical(end) : end, std::move(report)};
}

const char *to_string(Outcome outcome) {
  switch (outcome) {
  case Outcome::completed: return "completed";
  case Outcome::blowup_detected: return "blowup_detected";
  case Outcome::picard_stalled: return "picard_stalled";
  }
  return "unknown";
}

RunStatus solve_ivp(const State &initial, double t_final,
                    const NonlinearitySpec &f, const SymbolTable &table,
                    const SolverConfig &config, const Observer &observer) {
  config.validate();
  f.validate();
  initial.validate();
  require_same_grid(table.grid(), initial.grid(), "solve_ivp");
  for (const auto *field : {&initial.u, &initial.v})
    for (const auto &c : field->values())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("initial state is not finite");

  RunStatus status;
  State state = to_spectral(initial);
  double t = state.time();
  StateNorms norms = state_norms(state, config.s);
  std::size_t index = 0;
  if (observer) observer({index, t, &state, norms, nullptr});

  auto finish = [&](Outcome outcome) {
    status.outcome = outcome;
    status.t_reached = t;
    status.last_norm = norms.total();
    status.final_state = state;
    return status;
  };

  if (norms.total() > config.blowup_threshold) {
    status.t_max = t;
    return finish(Outcome::blowup_detected);
  }

  const double end_tolerance = 1e-12 * std::max(1.0, std::abs(t_final));
  while (t_final - t > end_tolerance) {
    double remaining = t_final - t;
    double T = window_length(norms.total(), f, config);
    if (remaining - T <= 1e-9 * T) T = remaining;

    WindowResult window = picard_window(state, T, f, table, config);
    if (window.report.status != WindowStatus::converged)
      return finish(Outcome::picard_stalled);

    state = std::move(window.end);
    t = state.time();
    norms = state_norms(state, config.s);
    ++index;
    status.iterations.push_back(window.report.iterations);
    status.contraction_ratios.push_back(window.report.max_contraction());
    status.window_lengths.push_back(T);
    if (observer) observer({index, t, &state, norms, &window.report});

    if (norms.total() > config.blowup_threshold) {
      status.t_max = t;
      return finish(Outcome::blowup_detected);
    }
  }
  return finish(Outcome::completed);
}

} // namespace nlwave
