#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlwave {

using Complex = std::complex<double>;

/// Raised for inconsistent grids, representations or malformed inputs.
class GridError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Periodic box [0, 2L)^n sampled with M points per axis; each sample is a
/// vector in the fiber C^N.
///
/// Grid points and modes share one linear index in row-major order (axis 0
/// slowest). Mode indices follow FFT order: index j on an axis carries the
/// integer wave number k = j for j < M/2 and k = j - M otherwise, so
/// k ranges over {-M/2, ..., M/2 - 1} and the frequency is xi = (pi/L) k.
class Grid {
public:
  Grid(int dim, double half_period, std::size_t samples, std::size_t fiber);

  int dim() const { return dim_; }
  double half_period() const { return half_period_; }
  std::size_t samples() const { return samples_; }
  std::size_t fiber() const { return fiber_; }

  /// M^n
  std::size_t size() const { return size_; }
  /// M^n * N
  std::size_t value_count() const { return size_ * fiber_; }

  double spacing() const { return 2.0 * half_period_ / double(samples_); }
  /// (2L)^n
  double volume() const;
  /// (Delta x)^n
  double cell_volume() const;
  double mode_spacing() const;

  /// Integer lattice coordinates of a mode (unused trailing axes are 0).
  std::array<int, 2> wave_numbers(std::size_t mode) const;
  std::array<double, 2> xi(std::size_t mode) const;
  double xi_sq(std::size_t mode) const;
  /// Linear index of the mode with the given wave numbers (taken mod M).
  std::size_t mode_index(std::array<int, 2> k) const;
  std::size_t zero_mode() const { return 0; }

  std::array<double, 2> point(std::size_t index) const;

  bool operator==(const Grid &other) const = default;

private:
  int dim_;
  double half_period_;
  std::size_t samples_;
  std::size_t fiber_;
  std::size_t size_;
};

enum class Representation { physical, spectral };

/// Fiber-valued field on a grid: size() sample points, fiber() complex values
/// per point, fiber index fastest.
class Field {
public:
  Field(Grid grid, Representation rep, double time = 0.0,
        bool real_valued = false);
  Field(Grid grid, Representation rep, std::vector<Complex> values,
        double time = 0.0, bool real_valued = false);

  const Grid &grid() const { return grid_; }
  Representation representation() const { return rep_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  bool real_valued() const { return real_; }
  void set_real_valued(bool real) { real_ = real; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  std::span<Complex> at(std::size_t index) {
    return {values_.data() + index * grid_.fiber(), grid_.fiber()};
  }
  std::span<const Complex> at(std::size_t index) const {
    return {values_.data() + index * grid_.fiber(), grid_.fiber()};
  }

  Field &operator+=(const Field &other);
  Field &operator-=(const Field &other);
  Field &operator*=(Complex scale);

  /// Same grid, representation, time and flag; values set to zero.
  Field zeros_like() const;

private:
  Grid grid_;
  Representation rep_;
  double time_;
  bool real_;
  std::vector<Complex> values_;
};

Field operator+(Field lhs, const Field &rhs);
Field operator-(Field lhs, const Field &rhs);
Field operator*(Complex scale, Field f);

/// Displacement u and velocity v = u_t at a common time.
struct State {
  Field u;
  Field v;

  double time() const { return u.time(); }
  const Grid &grid() const { return u.grid(); }
  void set_time(double t) {
    u.set_time(t);
    v.set_time(t);
  }
  /// Throws GridError unless u and v share grid, representation and time.
  void validate() const;
};

/// u_hat_k = M^{-n} sum_j u_j exp(-i xi_k . x_j)
Field forward_transform(const Field &f);
Field inverse_transform(const Field &f);
Field to_spectral(const Field &f);
Field to_physical(const Field &f);
State to_spectral(const State &s);
State to_physical(const State &s);

/// sqrt(sum_k (1 + |xi_k|^2)^s |u_hat_k|^2 (2L)^n)
double sobolev_norm(const Field &f, double s);
/// max over grid points of the Euclidean fiber norm (physical fields only).
double sup_norm(const Field &f);
/// sqrt(sum_j |u_j|^2 (Delta x)^n) evaluated in physical space.
double l2_norm_physical(const Field &f);

/// sup_norm + sobolev_norm(s), the working norm of the solver.
double working_norm(const Field &f, double s);

/// Largest relative violation of u_hat(-xi) = conj(u_hat(xi)).
double conjugate_symmetry_defect(const Field &spectral);

void require_same_grid(const Grid &a, const Grid &b, const char *what);

} // namespace nlwave
