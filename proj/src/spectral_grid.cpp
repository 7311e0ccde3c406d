#include "nlwave/spectral_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nlwave {

namespace {

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

struct PlanDeleter {
  void operator()(fftw_plan_s *p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread-safe, execution with new-array execute is.
class PlanCache {
public:
  fftw_plan get(int dim, std::size_t m, std::size_t fiber, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, m, fiber, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();

    std::size_t total = fiber;
    for (int d = 0; d < dim; ++d) total *= m;
    std::vector<Complex> scratch_in(total), scratch_out(total);
    auto *in = reinterpret_cast<fftw_complex *>(scratch_in.data());
    auto *out = reinterpret_cast<fftw_complex *>(scratch_out.data());
    int dims[2] = {int(m), int(m)};
    fftw_plan plan =
        fftw_plan_many_dft(dim, dims, int(fiber), in, nullptr, int(fiber), 1,
                           out, nullptr, int(fiber), 1, sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw GridError("fftw: failed to create plan");
    auto [pos, ok] = plans_.emplace(key, PlanHandle(plan));
    return pos->second.get();
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, std::size_t, int>, PlanHandle> plans_;
};

PlanCache &plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid &g, std::span<const Complex> in, std::span<Complex> out,
             int sign) {
  fftw_plan plan = plan_cache().get(g.dim(), g.samples(), g.fiber(), sign);
  // new-array execute never writes to the input for out-of-place plans
  auto *src = reinterpret_cast<fftw_complex *>(const_cast<Complex *>(in.data()));
  auto *dst = reinterpret_cast<fftw_complex *>(out.data());
  fftw_execute_dft(plan, src, dst);
}

int wave_number(std::size_t j, std::size_t m) {
  return j < m / 2 ? int(j) : int(j) - int(m);
}

} // namespace

Grid::Grid(int dim, double half_period, std::size_t samples, std::size_t fiber)
    : dim_(dim), half_period_(half_period), samples_(samples), fiber_(fiber),
      size_(1) {
  if (dim != 1 && dim != 2)
    throw GridError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (!(half_period > 0.0) || !std::isfinite(half_period))
    throw GridError("grid half period L must be positive");
  if (samples < 4 || !is_power_of_two(samples))
    throw GridError("grid sample count M must be a power of two >= 4, got " +
                    std::to_string(samples));
  if (fiber < 1) throw GridError("fiber dimension N must be >= 1");
  for (int d = 0; d < dim; ++d) size_ *= samples;
}

double Grid::volume() const { return std::pow(2.0 * half_period_, dim_); }

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::mode_spacing() const { return std::numbers::pi / half_period_; }

std::array<int, 2> Grid::wave_numbers(std::size_t mode) const {
  if (dim_ == 1) return {wave_number(mode, samples_), 0};
  return {wave_number(mode / samples_, samples_),
          wave_number(mode % samples_, samples_)};
}

std::array<double, 2> Grid::xi(std::size_t mode) const {
  auto k = wave_numbers(mode);
  double h = mode_spacing();
  return {h * k[0], h * k[1]};
}

double Grid::xi_sq(std::size_t mode) const {
  auto x = xi(mode);
  return x[0] * x[0] + x[1] * x[1];
}

std::size_t Grid::mode_index(std::array<int, 2> k) const {
  auto wrap = [m = int(samples_)](int v) { return std::size_t(((v % m) + m) % m); };
  if (dim_ == 1) return wrap(k[0]);
  return wrap(k[0]) * samples_ + wrap(k[1]);
}

std::array<double, 2> Grid::point(std::size_t index) const {
  double h = spacing();
  if (dim_ == 1) return {h * double(index), 0.0};
  return {h * double(index / samples_), h * double(index % samples_)};
}

void require_same_grid(const Grid &a, const Grid &b, const char *what) {
  if (!(a == b)) throw GridError(std::string(what) + ": grid mismatch");
}

Field::Field(Grid grid, Representation rep, double time, bool real_valued)
    : grid_(grid), rep_(rep), time_(time), real_(real_valued),
      values_(grid.value_count()) {}

Field::Field(Grid grid, Representation rep, std::vector<Complex> values,
             double time, bool real_valued)
    : grid_(grid), rep_(rep), time_(time), real_(real_valued),
      values_(std::move(values)) {
  if (values_.size() != grid_.value_count())
    throw GridError("field value count " + std::to_string(values_.size()) +
                    " does not match grid (" +
                    std::to_string(grid_.value_count()) + ")");
}

Field &Field::operator+=(const Field &other) {
  require_same_grid(grid_, other.grid_, "field addition");
  if (rep_ != other.rep_) throw GridError("field addition: representation mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field &Field::operator-=(const Field &other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  if (rep_ != other.rep_)
    throw GridError("field subtraction: representation mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field &Field::operator*=(Complex scale) {
  for (auto &v : values_) v *= scale;
  return *this;
}

Field Field::zeros_like() const { return Field(grid_, rep_, time_, real_); }

Field operator+(Field lhs, const Field &rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field &rhs) { return lhs -= rhs; }
Field operator*(Complex scale, Field f) { return f *= scale; }

void State::validate() const {
  require_same_grid(u.grid(), v.grid(), "state");
  if (u.representation() != v.representation())
    throw GridError("state: u and v representations differ");
  if (u.time() != v.time()) throw GridError("state: u and v times differ");
}

Field forward_transform(const Field &f) {
  if (f.representation() != Representation::physical)
    throw GridError("forward_transform expects a physical field");
  Field out(f.grid(), Representation::spectral, f.time(), f.real_valued());
  execute(f.grid(), f.values(), out.values(), FFTW_FORWARD);
  out *= 1.0 / double(f.grid().size());
  return out;
}

Field inverse_transform(const Field &f) {
  if (f.representation() != Representation::spectral)
    throw GridError("inverse_transform expects a spectral field");
  Field out(f.grid(), Representation::physical, f.time(), f.real_valued());
  execute(f.grid(), f.values(), out.values(), FFTW_BACKWARD);
  if (f.real_valued())
    for (auto &v : out.values()) v = {v.real(), 0.0};
  return out;
}

Field to_spectral(const Field &f) {
  return f.representation() == Representation::spectral ? f : forward_transform(f);
}

Field to_physical(const Field &f) {
  return f.representation() == Representation::physical ? f : inverse_transform(f);
}

State to_spectral(const State &s) { return {to_spectral(s.u), to_spectral(s.v)}; }
State to_physical(const State &s) { return {to_physical(s.u), to_physical(s.v)}; }

double sobolev_norm(const Field &f, double s) {
  Field spec = to_spectral(f);
  const Grid &g = spec.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double w = s == 0.0 ? 1.0 : std::pow(1.0 + g.xi_sq(k), s);
    double local = 0.0;
    for (const auto &c : spec.at(k)) local += std::norm(c);
    sum += w * local;
  }
  return std::sqrt(sum * g.volume());
}

double sup_norm(const Field &f) {
  if (f.representation() != Representation::physical)
    throw GridError("sup_norm expects a physical field");
  double best = 0.0;
  for (std::size_t j = 0; j < f.grid().size(); ++j) {
    double local = 0.0;
    for (const auto &c : f.at(j)) local += std::norm(c);
    best = std::max(best, local);
  }
  return std::sqrt(best);
}

double l2_norm_physical(const Field &f) {
  if (f.representation() != Representation::physical)
    throw GridError("l2_norm_physical expects a physical field");
  double sum = 0.0;
  for (const auto &c : f.values()) sum += std::norm(c);
  return std::sqrt(sum * f.grid().cell_volume());
}

double working_norm(const Field &f, double s) {
  if (f.representation() == Representation::physical)
    return sup_norm(f) + sobolev_norm(f, s);
  return sup_norm(inverse_transform(f)) + sobolev_norm(f, s);
}

double conjugate_symmetry_defect(const Field &spectral) {
  if (spectral.representation() != Representation::spectral)
    throw GridError("conjugate symmetry is defined on spectral fields");
  const Grid &g = spectral.grid();
  double scale = 0.0;
  for (const auto &c : spectral.values()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto kk = g.wave_numbers(k);
    std::size_t mirror = g.mode_index({-kk[0], -kk[1]});
    auto a = spectral.at(k);
    auto b = spectral.at(mirror);
    for (std::size_t i = 0; i < g.fiber(); ++i)
      worst = std::max(worst, std::abs(a[i] - std::conj(b[i])));
  }
  return worst / scale;
}

} // namespace nlwave
