#include "nlwave/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace nlwave {

using json = nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string &message)
    : std::runtime_error(field.empty() ? message : field + ": " + message),
      field_(std::move(field)) {}

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Section {
public:
  Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string &key) {
    known_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  template <class T> void read(const std::string &key, T &out) {
    if (!has(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception &) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  Section sub(const std::string &key) {
    known_.insert(key);
    static const json empty = json::object();
    if (!node_.contains(key)) return Section(empty, field(key));
    return Section(node_.at(key), field(key));
  }

  void reject_unknown() const {
    for (const auto &[key, value] : node_.items()) {
      if (known_.count(key)) continue;
      std::string best;
      std::size_t best_distance = 3;
      for (const auto &candidate : known_) {
        std::size_t d = edit_distance(key, candidate);
        if (d < best_distance) {
          best_distance = d;
          best = candidate;
        }
      }
      std::string message = "unknown key '" + key + "'";
      if (!best.empty()) message += "; did you mean '" + best + "'?";
      throw ConfigError(field(key), message);
    }
  }

private:
  const json &node_;
  std::string path_;
  std::set<std::string> known_;
};

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

void require(bool ok, const std::string &field, const std::string &message) {
  if (!ok) throw ConfigError(field, message);
}

template <class T> bool contains(const std::vector<T> &v, const T &x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void validate(const RunConfig &cfg) {
  require(cfg.version == kConfigVersion, "version",
          "unsupported config version " + std::to_string(cfg.version));
  const auto &g = cfg.grid;
  require(g.n == 1 || g.n == 2, "grid.n", "must be 1 or 2");
  require(g.L > 0.0 && std::isfinite(g.L), "grid.L", "must be positive");
  require(g.M >= 4 && is_power_of_two(g.M), "grid.M", "must be a power of two >= 4");
  require(g.N >= 1, "grid.N", "must be >= 1");

  const auto &s = cfg.symbols;
  require(contains(symbol_preset_names(), s.preset), "symbols.preset",
          "unknown preset '" + s.preset + "'");
  require(s.r >= 0.0, "symbols.r", "must be >= 0");
  require(s.a0 >= 0.0, "symbols.a0", "must be >= 0");
  if (s.preset == "thm51-diagonal")
    require(s.c.empty() || s.c.size() == g.N, "symbols.c",
            "needs exactly grid.N = " + std::to_string(g.N) + " values");
  if (s.preset == "custom")
    require(s.A_expr.size() == 1 || s.A_expr.size() == g.N * g.N, "symbols.A_expr",
            "needs 1 or N*N expressions");

  const auto &nl = cfg.nonlinearity;
  require(contains(nonlinearity_preset_names(), nl.preset), "nonlinearity.preset",
          "unknown preset '" + nl.preset + "'");
  require(nl.exponent >= 1, "nonlinearity.exponent", "must be >= 1");

  const auto &d = cfg.initial_data;
  require(contains(profile_names(), d.profile), "initial_data.profile",
          "unknown profile '" + d.profile + "'");
  require(d.amplitude >= 0.0, "initial_data.amplitude", "must be >= 0");
  require(d.width > 0.0, "initial_data.width", "must be > 0");
  require(d.spectrum == "algebraic" || d.spectrum == "gaussian", "initial_data.spectrum",
          "must be 'algebraic' or 'gaussian'");
  require(d.center.empty() || d.center.size() == std::size_t(g.n),
          "initial_data.center", "needs grid.n values");
  require(d.wavenumber.empty() || d.wavenumber.size() == std::size_t(g.n),
          "initial_data.wavenumber", "needs grid.n values");

  const auto &sv = cfg.solver;
  require(sv.picard_tol > 0.0, "solver.picard_tol", "must be > 0");
  require(sv.max_picard_iters >= 1, "solver.max_picard_iters", "must be >= 1");
  require(sv.quad.nodes >= 3, "solver.nodes_per_window", "must be >= 3");
  require(sv.quad.rule != Quadrature::Rule::simpson || sv.quad.nodes % 2 == 1,
          "solver.nodes_per_window", "must be odd for simpson");
  require(sv.C0 > 0.0, "solver.C0", "must be > 0");
  require(sv.C1 > 0.0, "solver.C1", "must be > 0");
  require(sv.blowup_threshold > 0.0, "solver.blowup_threshold", "must be > 0");
  require(!sv.window_override || *sv.window_override > 0.0, "solver.window_override",
          "must be > 0");
  require(cfg.t_final >= 0.0 && std::isfinite(cfg.t_final), "solver.t_final",
          "must be finite and >= 0");

  require(cfg.output.csv_every > 0, "output.csv_every", "must be > 0");
  require(cfg.output.snapshot_every > 0, "output.snapshot_every", "must be > 0");

  const auto &c = cfg.checks;
  require(c.C_g > 0.0, "checks.C_g", "must be > 0");
  require(c.M_bound > 0.0, "checks.M_bound", "must be > 0");
  require(c.k > 0.0, "checks.k", "must be > 0");
  require(c.sigma_max > 0.0, "checks.sigma_max", "must be > 0");
}

RunConfig from_json(const json &root) {
  RunConfig cfg;
  Section top(root, "");
  top.read("version", cfg.version);

  Section grid = top.sub("grid");
  grid.read("n", cfg.grid.n);
  grid.read("L", cfg.grid.L);
  grid.read("M", cfg.grid.M);
  grid.read("N", cfg.grid.N);
  grid.reject_unknown();

  Section sym = top.sub("symbols");
  sym.read("preset", cfg.symbols.preset);
  sym.read("m", cfg.symbols.m);
  sym.read("r", cfg.symbols.r);
  sym.read("a0", cfg.symbols.a0);
  sym.read("sigma", cfg.symbols.sigma);
  sym.read("c", cfg.symbols.c);
  sym.read("a_expr", cfg.symbols.a_expr);
  sym.read("g_expr", cfg.symbols.g_expr);
  if (sym.has("A_expr")) {
    const json &a = root.at("symbols").at("A_expr");
    if (a.is_string()) cfg.symbols.A_expr = {a.get<std::string>()};
    else sym.read("A_expr", cfg.symbols.A_expr);
  }
  sym.reject_unknown();

  Section nl = top.sub("nonlinearity");
  nl.read("preset", cfg.nonlinearity.preset);
  nl.read("coefficient", cfg.nonlinearity.coefficient);
  nl.read("exponent", cfg.nonlinearity.exponent);
  nl.reject_unknown();

  Section data = top.sub("initial_data");
  data.read("profile", cfg.initial_data.profile);
  data.read("amplitude", cfg.initial_data.amplitude);
  data.read("seed", cfg.initial_data.seed);
  data.read("width", cfg.initial_data.width);
  data.read("spectrum", cfg.initial_data.spectrum);
  data.read("center", cfg.initial_data.center);
  data.read("wavenumber", cfg.initial_data.wavenumber);
  data.reject_unknown();

  Section solver = top.sub("solver");
  solver.read("s", cfg.solver.s);
  solver.read("picard_tol", cfg.solver.picard_tol);
  solver.read("max_picard_iters", cfg.solver.max_picard_iters);
  if (solver.has("quadrature")) {
    std::string rule;
    solver.read("quadrature", rule);
    try {
      cfg.solver.quad.rule = parse_quadrature_rule(rule);
    } catch (const std::invalid_argument &e) {
      throw ConfigError("solver.quadrature", e.what());
    }
  }
  solver.read("nodes_per_window", cfg.solver.quad.nodes);
  solver.read("C0", cfg.solver.C0);
  solver.read("C1", cfg.solver.C1);
  solver.read("blowup_threshold", cfg.solver.blowup_threshold);
  if (solver.has("window_override")) {
    double w = 0.0;
    solver.read("window_override", w);
    cfg.solver.window_override = w;
  }
  solver.read("t_final", cfg.t_final);
  solver.reject_unknown();

  Section out = top.sub("output");
  out.read("directory", cfg.output.directory);
  out.read("csv_every", cfg.output.csv_every);
  out.read("snapshot_every", cfg.output.snapshot_every);
  out.reject_unknown();

  Section checks = top.sub("checks");
  checks.read("kernel_decay", cfg.checks.kernel_decay);
  checks.read("C_g", cfg.checks.C_g);
  checks.read("symbol_derivative", cfg.checks.symbol_derivative);
  checks.read("M_bound", cfg.checks.M_bound);
  checks.read("global_existence", cfg.checks.global_existence);
  checks.read("k", cfg.checks.k);
  checks.read("sigma_max", cfg.checks.sigma_max);
  checks.reject_unknown();

  top.reject_unknown();
  validate(cfg);
  return cfg;
}

std::string position_of(std::string_view doc, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte > 0 ? byte - 1 : 0, doc.size()); ++i) {
    if (doc[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

RunConfig parse_config(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error &e) {
    throw ConfigError("", "parse error at " + position_of(document, e.byte) + ": " +
                              e.what());
  }
  return from_json(root);
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<std::string> symbol_preset_names() {
  return {"classical", "bessel-a", "thm51-diagonal", "custom"};
}

std::vector<std::string> nonlinearity_preset_names() {
  return {"none", "power", "signed-power"};
}

std::vector<std::string> profile_names() {
  return {"gaussian", "plane-wave", "random-smooth"};
}

Grid make_grid(const RunConfig &cfg) {
  return Grid(cfg.grid.n, cfg.grid.L, cfg.grid.M, cfg.grid.N);
}

SymbolSpec make_symbols(const RunConfig &cfg) {
  const auto &s = cfg.symbols;
  const std::size_t n = cfg.grid.N;
  if (s.preset == "classical") return presets::classical(n, s.m, s.r);
  if (s.preset == "bessel-a") return presets::bessel_a(n, s.m, s.r);
  if (s.preset == "thm51-diagonal") {
    std::vector<double> c = s.c.empty() ? std::vector<double>(n, 1.0) : s.c;
    return presets::thm51_diagonal(c, s.sigma, s.r, s.a0);
  }
  return presets::custom(n, s.a_expr, s.g_expr, s.A_expr);
}

NonlinearitySpec make_nonlinearity(const RunConfig &cfg) {
  const auto &nl = cfg.nonlinearity;
  const std::size_t n = cfg.grid.N;
  int order = std::max(1, int(std::ceil(cfg.solver.s)));
  if (nl.preset == "power") return presets::power(n, nl.coefficient, nl.exponent, order);
  if (nl.preset == "signed-power")
    return presets::signed_power(n, nl.coefficient, nl.exponent, order);
  return presets::no_nonlinearity(n);
}

namespace {

// Coefficients drawn per lattice point so that the same seed gives the same
// low modes at every resolution.
Complex random_coefficient(std::uint64_t seed, std::array<int, 2> k,
                           std::size_t component, int which) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(k[0] + 100000), std::uint32_t(k[1] + 100000),
                    std::uint32_t(component), std::uint32_t(which)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  double re = normal(rng);
  double im = normal(rng);
  return {re, im};
}

bool canonical(std::array<int, 2> k) {
  return k[0] > 0 || (k[0] == 0 && k[1] > 0);
}

Field random_smooth_field(const Grid &grid, const RunConfig &cfg, int which) {
  Field spec(grid, Representation::spectral, 0.0, true);
  const int kmax = int(grid.samples() / 4);
  const double decay = -(cfg.solver.s + 1.0) / 2.0;
  // the gaussian envelope uses the width as a correlation length
  const double w = cfg.initial_data.width;
  const bool gaussian = cfg.initial_data.spectrum == "gaussian";
  for (std::size_t m = 0; m < grid.size(); ++m) {
    auto k = grid.wave_numbers(m);
    if (std::abs(k[0]) > kmax || std::abs(k[1]) > kmax) continue;
    bool zero = k[0] == 0 && k[1] == 0;
    std::array<int, 2> rep = zero || canonical(k) ? k : std::array<int, 2>{-k[0], -k[1]};
    double amp = gaussian ? std::exp(-0.25 * w * w * grid.xi_sq(m))
                          : std::pow(1.0 + grid.xi_sq(m), decay);
    for (std::size_t j = 0; j < grid.fiber(); ++j) {
      Complex c = random_coefficient(cfg.initial_data.seed, rep, j, which);
      if (zero) c = c.real();
      else if (!canonical(k)) c = std::conj(c);
      spec.at(m)[j] = amp * c;
    }
  }
  return inverse_transform(spec);
}

} // namespace

State make_initial_state(const RunConfig &cfg, const SymbolTable &table) {
  const Grid &grid = table.grid();
  const auto &d = cfg.initial_data;
  Field u(grid, Representation::physical, 0.0, true);
  Field v(grid, Representation::physical, 0.0, true);

  if (d.profile == "gaussian") {
    std::array<double, 2> center{grid.half_period(), grid.half_period()};
    for (std::size_t i = 0; i < d.center.size(); ++i) center[i] = d.center[i];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      auto x = grid.point(j);
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a)
        r2 += (x[std::size_t(a)] - center[std::size_t(a)]) *
              (x[std::size_t(a)] - center[std::size_t(a)]);
      double value = d.amplitude * std::exp(-r2 / (d.width * d.width));
      for (auto &c : u.at(j)) c = value;
    }
  } else if (d.profile == "plane-wave") {
    std::array<int, 2> k{1, 0};
    for (std::size_t i = 0; i < d.wavenumber.size(); ++i) k[i] = d.wavenumber[i];
    const double h = grid.mode_spacing();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      auto x = grid.point(j);
      double phase = h * (k[0] * x[0] + k[1] * x[1]);
      for (auto &c : u.at(j)) c = d.amplitude * std::cos(phase);
    }
  } else {
    u = random_smooth_field(grid, cfg, 0);
    v = random_smooth_field(grid, cfg, 1);
    double norm = working_norm(u, cfg.solver.s) + working_norm(v, cfg.solver.s);
    if (norm > 0.0) {
      u *= d.amplitude / norm;
      v *= d.amplitude / norm;
    }
  }
  return {std::move(u), std::move(v)};
}

} // namespace nlwave
