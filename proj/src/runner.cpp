#include "nlwave/runner.hpp"

#include "nlwave/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

namespace nlwave {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string csv_row(double t, const EnergyBreakdown &e, const StateNorms &norms,
                    int picard_iters, double contraction_ratio, double window) {
  std::string row;
  auto add = [&row](const std::string &s) {
    if (!row.empty()) row += ',';
    row += s;
  };
  for (double x : {t, e.total(), e.corrected(), e.kinetic, e.dispersive_a,
                   e.dispersive_A, e.zero_mode, e.potential, e.correction,
                   norms.sup_u, norms.hs_u, norms.sup_ut, norms.hs_ut})
    add(format_double(x));
  add(std::to_string(picard_iters));
  add(format_double(contraction_ratio));
  add(format_double(window));
  return row;
}

fs::path snapshot_path(const fs::path &dir, std::size_t index) {
  std::string name = std::to_string(index);
  name.insert(0, name.size() < 6 ? 6 - name.size() : 0, '0');
  return dir / "snapshots" / ("snap_" + name + ".nlwv");
}

bool write_checks_report(std::ostream &out, const RunConfig &cfg,
                         const SymbolTable &table, const NonlinearitySpec &f) {
  bool all = true;
  auto verdict = [&all](bool ok) {
    all = all && ok;
    return ok ? "pass" : "fail";
  };
  const auto &c = cfg.checks;
  out << "symbols: " << table.spec().name << "\n";
  out << "eta_nonzero: "
      << (table.degenerate_modes().empty() ? "pass" : "warn") << "\n";
  out << "eta_zero_modes: " << table.degenerate_modes().size() << "\n";
  if (c.kernel_decay) {
    auto r = check_kernel_decay(table, cfg.symbols.r, c.C_g);
    out << "kernel_decay: " << verdict(r.passed) << "\n";
    out << "kernel_decay.max_ratio: " << format_double(r.max_ratio) << "\n";
    out << "kernel_decay.violations: " << r.violations.size() << "\n";
  }
  if (c.symbol_derivative) {
    auto r = check_symbol_derivative_bound(table, c.M_bound);
    out << "symbol_derivative_bound: " << verdict(r.passed) << "\n";
    out << "symbol_derivative_bound.max_ratio: " << format_double(r.max_ratio) << "\n";
    out << "symbol_derivative_bound.skipped_modes: " << r.skipped_modes.size() << "\n";
  }
  bool f_ok = true;
  try {
    f.validate();
  } catch (const NonlinearityError &) {
    f_ok = false;
  }
  out << "nonlinearity: " << f.name << "\n";
  out << "f_zero_at_origin: " << verdict(f_ok) << "\n";
  bool monotone = true;
  double previous = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double value = fbar_eval(f, 0.1 * i).value;
    if (value < previous) monotone = false;
    previous = value;
  }
  out << "fbar_nondecreasing: " << verdict(monotone) << "\n";
  out << "fbar_lower_bound: " << (fbar_eval(f, 1.0).lower_bound ? "yes" : "no") << "\n";
  if (c.global_existence) {
    auto r = global_existence_check(f, c.k, c.sigma_max);
    out << "global_existence: " << verdict(r.passed) << "\n";
    out << "global_existence.worst_margin: " << format_double(r.worst_margin) << "\n";
  }
  return all;
}

ScenarioResult run_scenario(const RunConfig &cfg,
                            const std::optional<fs::path> &out_dir,
                            std::optional<double> until) {
  ScenarioResult result;
  result.directory = out_dir ? *out_dir : fs::path(cfg.output.directory);
  try {
    fs::create_directories(result.directory / "snapshots");
    Grid grid = make_grid(cfg);
    SymbolTable table = build_symbol_table(grid, make_symbols(cfg));
    NonlinearitySpec f = make_nonlinearity(cfg);
    {
      std::ofstream checks(result.directory / "checks.txt");
      if (!checks) throw std::runtime_error("cannot write checks report");
      write_checks_report(checks, cfg, table, f);
    }

    State initial = make_initial_state(cfg, table);
    std::ofstream csv(result.directory / "energy.csv");
    if (!csv) throw std::runtime_error("cannot write energy.csv");
    csv << kCsvHeader << "\n";

    ConservationMonitor monitor(table, f, cfg.solver.quad);
    std::size_t last_row = std::size_t(-1), last_snapshot = std::size_t(-1);
    struct Last {
      std::size_t index = 0;
      StateNorms norms;
      int iters = 0;
      double ratio = 0.0, window = 0.0;
    } last;
    std::optional<State> last_state;

    auto write_row = [&](std::size_t index) {
      const auto &sample = monitor.series().back();
      csv << csv_row(sample.t, sample.energy, last.norms, last.iters, last.ratio,
                     last.window)
          << "\n";
      last_row = index;
    };

    Observer observer = [&](const Observation &obs) {
      monitor.record(obs);
      last.index = obs.index;
      last.norms = obs.norms;
      last.iters = obs.window ? obs.window->iterations : 0;
      last.ratio = obs.window ? obs.window->max_contraction() : 0.0;
      last.window = obs.window ? obs.window->length : 0.0;
      last_state = *obs.state;
      if (obs.index % std::size_t(cfg.output.csv_every) == 0) write_row(obs.index);
      if (obs.index % std::size_t(cfg.output.snapshot_every) == 0) {
        write_snapshot(snapshot_path(result.directory, obs.index), *obs.state);
        last_snapshot = obs.index;
      }
    };

    double t_final = until ? *until : cfg.t_final;
    result.status = solve_ivp(initial, t_final, f, table, cfg.solver, observer);
    if (last_row != last.index) write_row(last.index);
    if (last_snapshot != last.index && last_state)
      write_snapshot(snapshot_path(result.directory, last.index), *last_state);
    csv.flush();
    result.max_drift = monitor.max_relative_drift();

    switch (result.status.outcome) {
    case Outcome::completed: result.exit_code = kExitCompleted; break;
    case Outcome::blowup_detected: result.exit_code = kExitBlowup; break;
    case Outcome::picard_stalled: result.exit_code = kExitStalled; break;
    }

    std::ofstream status(result.directory / "status.txt");
    status << "outcome: " << to_string(result.status.outcome) << "\n";
    status << "t_reached: " << format_double(result.status.t_reached) << "\n";
    if (result.status.t_max)
      status << "t_max: " << format_double(*result.status.t_max) << "\n";
    status << "windows: " << result.status.window_lengths.size() << "\n";
    status << "max_relative_drift: " << format_double(result.max_drift) << "\n";
    status << "exit_code: " << result.exit_code << "\n";
  } catch (const std::exception &e) {
    std::cerr << "nlwave: " << e.what() << "\n";
    result.exit_code = kExitConfigError;
  }
  return result;
}

} // namespace nlwave
