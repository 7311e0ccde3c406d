#pragma once

#include "nlwave/config.hpp"
#include "nlwave/energy.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nlwave {

/// Exit statuses of a scenario run.
enum ExitCode : int {
  kExitCompleted = 0,
  kExitConfigError = 1,
  kExitBlowup = 2,
  kExitStalled = 3,
};

inline constexpr const char *kCsvHeader =
    "t,E_total,E_corrected,E_kinetic,E_disp_a,E_disp_A,E_zero_mode,"
    "E_potential,E_correction,sup_u,hs_u,sup_ut,hs_ut,picard_iters,"
    "contraction_ratio,window_T";

/// Shortest decimal string that round-trips the double.
std::string format_double(double value);

/// One CSV line (no trailing newline) in the column order of kCsvHeader.
std::string csv_row(double t, const EnergyBreakdown &e, const StateNorms &norms,
                    int picard_iters, double contraction_ratio, double window);

/// Hypothesis checks as "key: value" lines; returns true when every check
/// passes.
bool write_checks_report(std::ostream &out, const RunConfig &cfg,
                         const SymbolTable &table, const NonlinearitySpec &f);

struct ScenarioResult {
  int exit_code = kExitCompleted;
  RunStatus status;
  double max_drift = 0.0;
  std::filesystem::path directory;
};

/// Runs checks and the solver, writing checks.txt, energy.csv,
/// snapshots/snap_<index>.nlwv and status.txt under the output directory.
ScenarioResult run_scenario(const RunConfig &cfg,
                            const std::optional<std::filesystem::path> &out_dir = {},
                            std::optional<double> until = {});

/// Snapshot path for an observation index.
std::filesystem::path snapshot_path(const std::filesystem::path &dir,
                                    std::size_t index);

} // namespace nlwave
