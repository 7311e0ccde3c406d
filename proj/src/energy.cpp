#include "nlwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlwave {

namespace {

double weight(const SymbolTable &table, std::size_t k) {
  return 1.0 / (table.xi_sq(k) * table.g(k));
}

Eigen::VectorXcd fiber_vector(std::span<const Complex> values) {
  return Eigen::Map<const Eigen::VectorXcd>(values.data(), long(values.size()));
}

double sq_norm(std::span<const Complex> values) {
  double s = 0.0;
  for (const auto &c : values) s += std::norm(c);
  return s;
}

} // namespace

Field b_apply(const SymbolTable &table, const Field &spectral) {
  require_same_grid(table.grid(), spectral.grid(), "b_apply");
  if (spectral.representation() != Representation::spectral)
    throw GridError("b_apply expects a spectral field");
  Field out = spectral;
  for (std::size_t k = 0; k < table.grid().size(); ++k) {
    if (!(table.g(k) > 0.0)) throw EnergyError("b_apply needs g_hat > 0");
    double m = k == table.grid().zero_mode()
                   ? 0.0
                   : 1.0 / (std::sqrt(table.xi_sq(k)) * std::sqrt(table.g(k)));
    for (auto &c : out.at(k)) c *= m;
  }
  return out;
}

double potential_G(const NonlinearitySpec &f, const Field &u) {
  if (f.is_zero()) return 0.0;
  if (!f.potential)
    throw EnergyError("nonlinearity '" + f.name + "' has no potential");
  Field phys = to_physical(u);
  double sum = 0.0;
  for (std::size_t j = 0; j < phys.grid().size(); ++j)
    sum += f.potential(phys.at(j)).real();
  return sum * phys.grid().cell_volume();
}

EnergyBreakdown energy_total(const State &state, const SymbolTable &table,
                             const NonlinearitySpec &f) {
  state.validate();
  require_same_grid(table.grid(), state.grid(), "energy_total");
  State spec = to_spectral(state);
  const Grid &grid = table.grid();
  const double volume = grid.volume();
  EnergyBreakdown e;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto u = spec.u.at(k);
    auto v = spec.v.at(k);
    Eigen::VectorXcd uk = fiber_vector(u);
    Eigen::VectorXcd Au = table.A(k) * uk;
    double quad_A = uk.dot(Au).real(); // <A u, u>
    e.g_conv_u_sq += table.g(k) * table.g(k) * sq_norm(u) * volume;
    if (k == grid.zero_mode()) {
      e.zero_mode = sq_norm(v) + quad_A;
      continue;
    }
    double w = weight(table, k);
    e.kinetic += w * sq_norm(v) * volume;
    e.dispersive_a += table.a(k) / table.g(k) * sq_norm(u) * volume;
    e.dispersive_A += w * quad_A * volume;
    e.B_A_u_sq += w * Au.squaredNorm() * volume;
  }
  e.potential = 2.0 * potential_G(f, spec.u);
  return e;
}

ConservationMonitor::ConservationMonitor(const SymbolTable &table,
                                         const NonlinearitySpec &f,
                                         Quadrature quad)
    : table_(table), f_(f), quad_(quad) {}

void ConservationMonitor::record(const Observation &obs) {
  if (obs.window && !f_.is_zero()) {
    const auto &nodes = obs.window->nodes;
    auto weights =
        cumulative_weights(quad_, obs.window->length / double(nodes.size() - 1)).back();
    const std::size_t zero = table_.grid().zero_mode();
    double work = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Field fu = nonlinear_term(nodes[i].u, f_);
      auto fz = fu.at(zero);
      auto vz = nodes[i].v.at(zero);
      double inner = 0.0;
      for (std::size_t j = 0; j < fz.size(); ++j) inner += (fz[j] * std::conj(vz[j])).real();
      work += weights[i] * inner;
    }
    correction_ += 2.0 * table_.grid().volume() * work;
  }
  EnergyBreakdown e = energy_total(*obs.state, table_, f_);
  e.correction = correction_;
  series_.push_back({obs.t, e});
}

double ConservationMonitor::max_relative_drift() const {
  if (series_.empty()) return 0.0;
  double e0 = series_.front().energy.corrected();
  double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  double worst = 0.0;
  for (const auto &s : series_)
    worst = std::max(worst, std::abs(s.energy.corrected() - e0) / scale);
  return worst;
}

GlobalExistenceReport global_existence_check(const NonlinearitySpec &f,
                                             double k, double sigma_max,
                                             std::size_t samples) {
  if (!(k > 0.0) || !(sigma_max > 0.0))
    throw EnergyError("global_existence_check needs k > 0 and sigma_max > 0");
  GlobalExistenceReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  if (f.is_zero()) {
    report.worst_margin = 0.0;
    return report;
  }
  if (!f.potential) throw EnergyError("nonlinearity '" + f.name + "' has no potential");

  const std::size_t n = f.fiber;
  std::vector<std::vector<double>> directions;
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> axis(n, 0.0);
    axis[d] = 1.0;
    directions.push_back(axis);
  }
  if (n > 1) directions.emplace_back(n, 1.0 / std::sqrt(double(n)));

  std::vector<Complex> point(n);
  for (const auto &dir : directions) {
    for (std::size_t i = 0; i < samples; ++i) {
      double sigma = -sigma_max + 2.0 * sigma_max * double(i) / double(samples - 1);
      for (std::size_t j = 0; j < n; ++j) point[j] = sigma * dir[j];
      double margin = f.potential(point).real() + k * sigma * sigma;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_sigma = sigma;
      }
      // equality cases differ from zero only by rounding
      if (margin < -1e-12 * std::max(1.0, k * sigma * sigma)) report.passed = false;
    }
  }
  return report;
}

EnergyInequalityReport energy_inequality_report(const State &state,
                                                const SymbolTable &table,
                                                double initial_energy, double k,
                                                double r, double C_g) {
  State spec = to_spectral(state);
  EnergyBreakdown e = energy_total(spec, table, presets::no_nonlinearity(table.grid().fiber()));
  EnergyInequalityReport report;
  report.quadratic = e.kinetic + e.dispersive_a + e.dispersive_A;
  double u_sq = std::pow(sobolev_norm(spec.u, 0.0), 2);
  report.bound = initial_energy + 2.0 * k * u_sq;
  report.velocity_weighted = e.kinetic;
  const Grid &grid = table.grid();
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (m == grid.zero_mode()) continue;
    report.velocity_sobolev += std::pow(1.0 + table.xi_sq(m), 0.5 * r - 1.0) *
                               sq_norm(spec.v.at(m)) * grid.volume();
  }
  report.velocity_sobolev /= C_g;
  return report;
}

} // namespace nlwave
