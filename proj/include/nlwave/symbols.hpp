#pragma once

#include "nlwave/spectral_grid.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace nlwave {

class SymbolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A negative power of eta was requested on a mode where eta has a zero
/// eigenvalue.
class SingularModeError : public SymbolError {
public:
  SingularModeError(std::size_t mode, std::array<int, 2> k);
  std::size_t mode() const { return mode_; }

private:
  std::size_t mode_;
};

using Frequency = std::array<double, 2>;
using FiberMatrix = Eigen::MatrixXcd;

/// Closed-form Fourier symbols of the three kernels:
///   dispersion   a_hat(xi) >= 0 (scalar)
///   coupling     g_hat(xi) >  0 (scalar, acts as a multiple of identity)
///   potential    A_hat(xi)      (N x N Hermitian, positive semidefinite)
struct SymbolSpec {
  std::string name;
  std::size_t fiber = 1;
  std::function<double(const Frequency &)> a_hat;
  std::function<double(const Frequency &)> g_hat;
  std::function<FiberMatrix(const Frequency &)> A_hat;
};

namespace presets {

/// a_hat = 1, A_hat = m^2 I, g_hat = (1 + |xi|^2)^{-r/2}
SymbolSpec classical(std::size_t fiber, double mass, double r);
/// a_hat = (1 + |xi|^2)^{-1}, A_hat = m^2 I, g_hat = (1 + |xi|^2)^{-r/2}
SymbolSpec bessel_a(std::size_t fiber, double mass, double r);
/// a_hat = a0, A_hat = diag(c_j (1 + |xi|^2)^{-1} 2^{sigma j}), j = 1..N,
/// g_hat = (1 + |xi|^2)^{-r/2}. `coefficients` must hold N values.
SymbolSpec thm51_diagonal(std::vector<double> coefficients, double sigma,
                          double r, double a0 = 1.0);

/// Symbols from parsed expressions. `A_entries` is either one expression
/// (times identity) or N*N expressions in row-major order.
SymbolSpec custom(std::size_t fiber, const std::string &a_expr,
                  const std::string &g_expr,
                  const std::vector<std::string> &A_entries);

} // namespace presets

/// Per-mode samples of the symbols and the Hermitian eigendecomposition
/// Q diag(lambda) Q* of a_hat |xi|^2 I + A_hat, with eta = sqrt(lambda).
///
/// When every sampled A_hat is diagonal the basis is the identity and no
/// matrices are stored.
class SymbolTable {
public:
  SymbolTable(Grid grid, SymbolSpec spec);

  const Grid &grid() const { return grid_; }
  const SymbolSpec &spec() const { return spec_; }
  bool diagonal() const { return diagonal_; }

  double a(std::size_t mode) const { return a_[mode]; }
  double g(std::size_t mode) const { return g_[mode]; }
  double xi_sq(std::size_t mode) const { return xi_sq_[mode]; }
  FiberMatrix A(std::size_t mode) const;

  std::span<const double> eigenvalues(std::size_t mode) const {
    return {lambda_.data() + mode * grid_.fiber(), grid_.fiber()};
  }
  std::span<const double> eta(std::size_t mode) const {
    return {eta_.data() + mode * grid_.fiber(), grid_.fiber()};
  }
  /// Unitary eigenbasis of the mode (identity for diagonal tables).
  FiberMatrix basis(std::size_t mode) const;

  /// a_hat |xi|^2 I + A_hat at the mode.
  FiberMatrix generator(std::size_t mode) const;

  /// Modes with at least one zero eta eigenvalue.
  const std::vector<std::size_t> &degenerate_modes() const { return degenerate_; }

  /// w -> Q* w
  void to_eigenbasis(std::size_t mode, std::span<const Complex> in,
                     std::span<Complex> out) const;
  /// w -> Q w
  void from_eigenbasis(std::size_t mode, std::span<const Complex> in,
                       std::span<Complex> out) const;

  Field to_eigenbasis(const Field &spectral) const;
  Field from_eigenbasis(const Field &spectral) const;

private:
  Grid grid_;
  SymbolSpec spec_;
  bool diagonal_ = true;
  std::vector<double> a_, g_, xi_sq_;
  // row-major N x N blocks, one per mode
  std::vector<Complex> A_;
  std::vector<double> lambda_, eta_;
  std::vector<Complex> basis_;
  std::vector<std::size_t> degenerate_;
};

SymbolTable build_symbol_table(const Grid &grid, const SymbolSpec &spec);

/// Q diag(eta^p) Q* w
std::vector<Complex> eta_apply(const SymbolTable &table, std::size_t mode,
                               std::span<const Complex> w, double p);

/// eta^p applied mode by mode to a spectral field.
Field eta_apply(const SymbolTable &table, const Field &spectral, double p);

struct ModeRatio {
  std::size_t mode;
  std::array<int, 2> k;
  double ratio;
};

struct KernelDecayReport {
  bool passed = true;
  double max_ratio = 0.0;
  std::vector<ModeRatio> violations;
};

/// Flags modes with g_hat(xi) > C_g (1 + |xi|^2)^{-r/2}; ratios are
/// g_hat / bound.
KernelDecayReport check_kernel_decay(const SymbolTable &table, double r,
                                     double C_g);

struct DerivativeBoundReport {
  bool passed = true;
  double max_ratio = 0.0;
  std::size_t worst_mode = 0;
  std::vector<std::size_t> skipped_modes;
};

/// max over modes and axes of || D A_hat(xi) eta^{-1}(xi) ||, with D the
/// centered difference of step one mode spacing along each axis.
DerivativeBoundReport check_symbol_derivative_bound(const SymbolTable &table,
                                                    double M_bound);

} // namespace nlwave
