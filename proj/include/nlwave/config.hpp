#pragma once

#include "nlwave/nonlinearity.hpp"
#include "nlwave/solver.hpp"
#include "nlwave/symbols.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nlwave {

/// Malformed or invalid run configuration. `field` names the offending key
/// path (e.g. "grid.M") when known.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string &message);
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

inline constexpr int kConfigVersion = 1;

struct GridBlock {
  int n = 1;
  double L = 3.141592653589793;
  std::size_t M = 64;
  std::size_t N = 1;
};

struct SymbolsBlock {
  std::string preset = "classical";
  double m = 1.0;
  double r = 2.0;
  double a0 = 1.0;                 // thm51-diagonal dispersion
  double sigma = 1.0;              // thm51-diagonal
  std::vector<double> c;           // thm51-diagonal, N values (default all 1)
  std::string a_expr = "1";        // custom
  std::string g_expr = "(1 + xi_sq)^-1";
  std::vector<std::string> A_expr{"1"};
};

struct NonlinearityBlock {
  std::string preset = "none";     // none | power | signed-power
  double coefficient = 1.0;
  int exponent = 2;
};

struct InitialDataBlock {
  std::string profile = "gaussian"; // gaussian | plane-wave | random-smooth
  double amplitude = 0.05;          // delta
  std::uint64_t seed = 1;
  double width = 1.0;               // gaussian, and random-smooth with a gaussian spectrum
  std::string spectrum = "algebraic"; // random-smooth: algebraic | gaussian
  std::vector<double> center;       // gaussian, default box center
  std::vector<int> wavenumber;      // plane-wave, default (1, 0)
};

struct OutputBlock {
  std::string directory = "out";
  int csv_every = 1;
  int snapshot_every = 10;
};

struct ChecksBlock {
  bool kernel_decay = true;
  double C_g = 1.0;
  bool symbol_derivative = true;
  double M_bound = 10.0;
  bool global_existence = true;
  double k = 1.0;
  double sigma_max = 10.0;
};

struct RunConfig {
  int version = kConfigVersion;
  GridBlock grid;
  SymbolsBlock symbols;
  NonlinearityBlock nonlinearity;
  InitialDataBlock initial_data;
  SolverConfig solver;
  double t_final = 1.0;
  OutputBlock output;
  ChecksBlock checks;
};

/// Parses and validates a JSON document; missing keys take the defaults
/// above and unknown keys are rejected.
RunConfig parse_config(std::string_view document);
RunConfig load_config(const std::string &path);

Grid make_grid(const RunConfig &cfg);
SymbolSpec make_symbols(const RunConfig &cfg);
NonlinearitySpec make_nonlinearity(const RunConfig &cfg);
/// Initial state (physical, real-valued) at t = 0.
State make_initial_state(const RunConfig &cfg, const SymbolTable &table);

std::vector<std::string> symbol_preset_names();
std::vector<std::string> nonlinearity_preset_names();
std::vector<std::string> profile_names();

} // namespace nlwave
