#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlwave/solver.hpp"
#include "oracles.hpp"

using namespace nlwave;

namespace {

Field cosine_field(const Grid &g, double wave, double amplitude) {
  Field u(g, Representation::physical, 0.0, true);
  for (std::size_t j = 0; j < g.size(); ++j) u.at(j)[0] = amplitude * std::cos(wave * g.point(j)[0]);
  return u;
}

State gaussian_state(const Grid &g, double delta) {
  Field u(g, Representation::physical, 0.0, true);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double x = g.point(j)[0] - g.half_period();
    u.at(j)[0] = delta * std::exp(-x * x);
  }
  return {u, Field(g, Representation::physical, 0.0, true)};
}

double max_diff(const Field &a, const Field &b) {
  std::vector<Complex> av(a.values().begin(), a.values().end());
  return oracle::max_abs_diff(av, b.values());
}

const Grid line(1, std::numbers::pi, 64, 1);
const SymbolTable boussinesq(line, presets::classical(1, 1.0, 2.0));

} // namespace

TEST_CASE("nonlinear rhs examples") {
  NonlinearitySpec square = presets::power(1, 1.0, 2);
  Field zero(line, Representation::physical);
  CHECK(oracle::max_abs(nonlinear_rhs(zero, square, boussinesq).values()) == 0.0);

  NonlinearitySpec identity = presets::power(1, 1.0, 1);
  SymbolTable flat(line, presets::custom(1, "1", "1", {"1"}));
  Field wave(line, Representation::physical);
  for (std::size_t j = 0; j < line.size(); ++j)
    wave.at(j)[0] = std::exp(Complex(0.0, 3.0 * line.point(j)[0]));
  Field r = nonlinear_rhs(wave, identity, flat);
  std::size_t k3 = line.mode_index({3, 0});
  // transform roundoff is amplified by |xi|^2
  for (std::size_t k = 0; k < line.size(); ++k)
    CHECK(std::abs(r.at(k)[0] - (k == k3 ? Complex(-9.0) : Complex(0.0))) <
          1e-15 * (1.0 + line.xi_sq(k)));

  Field cos1 = cosine_field(line, 1.0, 1.0);
  Field c2 = nonlinear_rhs(cos1, square, boussinesq);
  double g2 = 1.0 / (1.0 + 4.0);
  for (std::size_t k = 0; k < line.size(); ++k) {
    int kk = line.wave_numbers(k)[0];
    Complex expected = (kk == 2 || kk == -2) ? Complex(-4.0 * g2 / 4.0) : Complex(0.0);
    CHECK(std::abs(c2.at(k)[0] - expected) < 1e-14);
  }
  CHECK(c2.at(0)[0] == Complex(0.0));

  NonlinearitySpec bad = square;
  bad.f = [](std::span<const Complex>, std::span<Complex> out) { out[0] = std::nan(""); };
  CHECK_THROWS_AS(nonlinear_rhs(cos1, bad, boussinesq), NonlinearityError);
}

TEST_CASE("zero mode of the rhs is exactly zero") {
  NonlinearitySpec cube = presets::power(2, 0.7, 3);
  Grid g(2, 1.0, 16, 2);
  SymbolTable table(g, presets::classical(2, 1.0, 1.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Field u(g, Representation::physical, oracle::random_values(g.value_count(), seed));
    Field r = nonlinear_rhs(u, cube, table);
    CHECK(r.at(0)[0] == Complex(0.0));
    CHECK(r.at(0)[1] == Complex(0.0));
  }
}

TEST_CASE("f(0) = 0 is enforced") {
  NonlinearitySpec shifted = presets::power(1, 1.0, 2);
  shifted.f = [](std::span<const Complex> u, std::span<Complex> out) { out[0] = u[0] * u[0] + 1e-6; };
  CHECK_THROWS_AS(shifted.validate(), NonlinearityError);
  CHECK_NOTHROW(presets::signed_power(3, -1.0, 3).validate());
}

TEST_CASE("fbar examples") {
  CHECK(fbar_eval(presets::power(1, 1.0, 2), 1.0).value == doctest::Approx(2.0));
  CHECK_FALSE(fbar_eval(presets::power(1, 1.0, 2), 1.0).lower_bound);
  for (double s : {0.0, 1.0, 10.0}) CHECK(fbar_eval(presets::no_nonlinearity(1), s).value == 0.0);
  CHECK(fbar_eval(presets::power(1, 1.0, 3), 2.0).value == doctest::Approx(12.0));

  // sampled envelopes bound the closed form from below and approach it
  NonlinearitySpec sampled = presets::power(1, 1.0, 3);
  sampled.envelope = {};
  auto e = fbar_eval(sampled, 2.0);
  CHECK(e.lower_bound);
  CHECK(e.value <= 12.0 * (1.0 + 1e-6));
  CHECK(e.value >= 0.9 * 12.0);

  double last = 0.0;
  for (int i = 0; i <= 40; ++i) {
    double v = fbar_eval(presets::power(1, 1.0, 3), 0.25 * i).value;
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("window length examples") {
  SolverConfig cfg;
  NonlinearitySpec unit = presets::power(1, 1.0, 2);
  unit.envelope = [](double) { return 1.0; };
  CHECK(window_length(1.0, unit, cfg) == doctest::Approx(0.1));
  CHECK(window_length(1.0, presets::no_nonlinearity(1), cfg) == doctest::Approx(0.5));

  NonlinearitySpec square = presets::power(1, 1.0, 2);
  double last = window_length(0.0, square, cfg);
  for (double m = 0.5; m < 100.0; m *= 1.5) {
    double t = window_length(m, square, cfg);
    CHECK(t < last);
    last = t;
  }
  cfg.window_override = 0.0125;
  CHECK(window_length(5.0, square, cfg) == 0.0125);
}

TEST_CASE("picard with f = 0 is the linear solve") {
  State s = to_spectral(gaussian_state(line, 0.3));
  auto result = picard_window(s, 0.37, presets::no_nonlinearity(1), boussinesq, SolverConfig{});
  CHECK(result.report.iterations == 1);
  State linear = linear_homogeneous_solve(s, 0.37, boussinesq);
  CHECK(max_diff(result.end.u, linear.u) < 1e-15);
  CHECK(max_diff(result.end.v, linear.v) < 1e-15);
  CHECK(result.end.time() == doctest::Approx(0.37));
}

TEST_CASE("small-amplitude windows contract") {
  SolverConfig cfg;
  NonlinearitySpec square = presets::power(1, 1.0, 2);
  State s = to_spectral(gaussian_state(line, 1e-3));
  double T = window_length(state_norms(s, cfg.s).total(), square, cfg);
  auto result = picard_window(s, T, square, boussinesq, cfg);
  CHECK(result.report.status == WindowStatus::converged);
  REQUIRE_FALSE(result.report.contraction_ratios.empty());
  CHECK(result.report.max_contraction() <= 0.5);
  CHECK(result.report.residual <= 10.0 * cfg.picard_tol);
  CHECK(result.report.nodes.size() == cfg.quad.nodes);
}

TEST_CASE("large windows stall") {
  SolverConfig cfg;
  cfg.max_picard_iters = 8;
  NonlinearitySpec square = presets::power(1, 1.0, 2);
  State s = to_spectral(gaussian_state(line, 5.0));
  auto result = picard_window(s, 2.0, square, boussinesq, cfg);
  CHECK(result.report.status != WindowStatus::converged);
}

TEST_CASE("solve_ivp with f = 0 follows the linear solution") {
  SolverConfig cfg;
  State s = gaussian_state(line, 0.2);
  double worst = 0.0;
  Observer check = [&](const Observation &obs) {
    State linear = linear_homogeneous_solve(to_spectral(s), obs.t, boussinesq);
    worst = std::max({worst, max_diff(obs.state->u, linear.u), max_diff(obs.state->v, linear.v)});
  };
  RunStatus status = solve_ivp(s, 10.0, presets::no_nonlinearity(1), boussinesq, cfg, check);
  CHECK(status.outcome == Outcome::completed);
  CHECK(status.t_reached == doctest::Approx(10.0));
  CHECK(worst < 1e-10);
}

TEST_CASE("small data stays bounded") {
  SolverConfig cfg;
  State s = gaussian_state(line, 1e-3);
  double initial = 0.0, peak = 0.0;
  Observer track = [&](const Observation &obs) {
    if (obs.index == 0) initial = obs.norms.total();
    peak = std::max(peak, obs.norms.total());
  };
  RunStatus status = solve_ivp(s, 50.0, presets::power(1, 1.0, 2), boussinesq, cfg, track);
  CHECK(status.outcome == Outcome::completed);
  CHECK(peak <= 3.0 * initial);
}

TEST_CASE("blow-up threshold crossing") {
  SolverConfig cfg;
  NonlinearitySpec square = presets::power(1, 1.0, 2);
  State s = gaussian_state(line, 0.05);
  std::vector<std::pair<double, double>> series;
  solve_ivp(s, 3.0, square, boussinesq, cfg,
            [&](const Observation &obs) { series.emplace_back(obs.t, obs.norms.total()); });
  double lo = series.front().second, hi = lo;
  for (auto &p : series) hi = std::max(hi, p.second);
  REQUIRE(hi > lo * 1.01);
  cfg.blowup_threshold = 0.5 * (lo + hi);
  double expected = 0.0;
  for (auto &p : series)
    if (p.second > cfg.blowup_threshold) {
      expected = p.first;
      break;
    }
  RunStatus status = solve_ivp(s, 3.0, square, boussinesq, cfg);
  CHECK(status.outcome == Outcome::blowup_detected);
  REQUIRE(status.t_max.has_value());
  CHECK(*status.t_max == doctest::Approx(expected).epsilon(1e-12));
  CHECK(status.last_norm > cfg.blowup_threshold);

  cfg.blowup_threshold = 1e-9;
  RunStatus immediate = solve_ivp(s, 3.0, square, boussinesq, cfg);
  CHECK(immediate.outcome == Outcome::blowup_detected);
  CHECK(*immediate.t_max == 0.0);
}

TEST_CASE("window halving converges") {
  NonlinearitySpec square = presets::power(1, 1.0, 2);
  State s = gaussian_state(line, 0.05);
  std::vector<Field> finals;
  for (double T : {0.1, 0.05, 0.025}) {
    SolverConfig cfg;
    cfg.window_override = T;
    RunStatus st = solve_ivp(s, 1.0, square, boussinesq, cfg);
    REQUIRE(st.outcome == Outcome::completed);
    finals.push_back(st.final_state->u);
  }
  double d1 = max_diff(finals[0], finals[1]);
  double d2 = max_diff(finals[1], finals[2]);
  CHECK(oracle::observed_order(d1, d2) >= SolverConfig{}.quad.order() - 1);
}
