#include "nlwave/symbols.hpp"

#include "nlwave/expression.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nlwave {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kHermitianTolerance = 1e-10;
constexpr double kClampTolerance = 1e-12;

std::string describe_mode(std::array<int, 2> k) {
  return "(" + std::to_string(k[0]) + ", " + std::to_string(k[1]) + ")";
}

double bessel(const Frequency &xi, double r) {
  return std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1], -0.5 * r);
}

double operator_norm(const FiberMatrix &m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<FiberMatrix> svd(m);
  return svd.singularValues()(0);
}

} // namespace

SingularModeError::SingularModeError(std::size_t mode, std::array<int, 2> k)
    : SymbolError("eta has a zero eigenvalue at mode " + describe_mode(k) +
                  "; negative powers are undefined"),
      mode_(mode) {}

namespace presets {

SymbolSpec classical(std::size_t fiber, double mass, double r) {
  SymbolSpec s;
  s.name = "classical";
  s.fiber = fiber;
  s.a_hat = [](const Frequency &) { return 1.0; };
  s.g_hat = [r](const Frequency &xi) { return bessel(xi, r); };
  s.A_hat = [fiber, m2 = mass * mass](const Frequency &) -> FiberMatrix {
    return m2 * FiberMatrix::Identity(long(fiber), long(fiber));
  };
  return s;
}

SymbolSpec bessel_a(std::size_t fiber, double mass, double r) {
  SymbolSpec s = classical(fiber, mass, r);
  s.name = "bessel-a";
  s.a_hat = [](const Frequency &xi) { return bessel(xi, 2.0); };
  return s;
}

SymbolSpec thm51_diagonal(std::vector<double> coefficients, double sigma,
                          double r, double a0) {
  if (coefficients.empty())
    throw SymbolError("thm51-diagonal needs at least one coefficient");
  SymbolSpec s;
  s.name = "thm51-diagonal";
  s.fiber = coefficients.size();
  s.a_hat = [a0](const Frequency &) { return a0; };
  s.g_hat = [r](const Frequency &xi) { return bessel(xi, r); };
  s.A_hat = [c = std::move(coefficients), sigma](const Frequency &xi) {
    const long n = long(c.size());
    FiberMatrix m = FiberMatrix::Zero(n, n);
    double b = bessel(xi, 2.0);
    for (long j = 0; j < n; ++j)
      m(j, j) = c[std::size_t(j)] * b * std::exp2(sigma * double(j + 1));
    return m;
  };
  return s;
}

SymbolSpec custom(std::size_t fiber, const std::string &a_expr,
                  const std::string &g_expr,
                  const std::vector<std::string> &A_entries) {
  if (A_entries.size() != 1 && A_entries.size() != fiber * fiber)
    throw SymbolError("custom A_hat needs 1 or N*N = " +
                      std::to_string(fiber * fiber) + " expressions, got " +
                      std::to_string(A_entries.size()));
  auto vars = [](const Frequency &xi) {
    return SymbolVariables{xi[0] * xi[0] + xi[1] * xi[1], xi[0], xi[1]};
  };
  SymbolSpec s;
  s.name = "custom";
  s.fiber = fiber;
  s.a_hat = [e = Expression(a_expr), vars](const Frequency &xi) { return e(vars(xi)); };
  s.g_hat = [e = Expression(g_expr), vars](const Frequency &xi) { return e(vars(xi)); };
  std::vector<Expression> entries;
  for (const auto &src : A_entries) entries.emplace_back(src);
  s.A_hat = [entries = std::move(entries), fiber, vars](const Frequency &xi) {
    const long n = long(fiber);
    auto v = vars(xi);
    if (entries.size() == 1)
      return FiberMatrix(entries[0](v) * FiberMatrix::Identity(n, n));
    FiberMatrix m(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) m(i, j) = entries[std::size_t(i * n + j)](v);
    return m;
  };
  return s;
}

} // namespace presets

SymbolTable::SymbolTable(Grid grid, SymbolSpec spec)
    : grid_(grid), spec_(std::move(spec)) {
  const std::size_t modes = grid_.size();
  const std::size_t n = grid_.fiber();
  if (spec_.fiber != n)
    throw SymbolError("symbol fiber dimension " + std::to_string(spec_.fiber) +
                      " does not match grid fiber " + std::to_string(n));
  if (!spec_.a_hat || !spec_.g_hat || !spec_.A_hat)
    throw SymbolError("symbol spec is missing a symbol function");

  a_.resize(modes);
  g_.resize(modes);
  xi_sq_.resize(modes);
  A_.resize(modes * n * n);
  lambda_.resize(modes * n);
  eta_.resize(modes * n);

  for (std::size_t k = 0; k < modes; ++k) {
    const auto xi = grid_.xi(k);
    const auto lattice = grid_.wave_numbers(k);
    a_[k] = spec_.a_hat(xi);
    g_[k] = spec_.g_hat(xi);
    xi_sq_[k] = grid_.xi_sq(k);
    if (!std::isfinite(a_[k]) || a_[k] < 0.0)
      throw SymbolError("a_hat is negative or non-finite at mode " +
                        describe_mode(lattice));
    if (!std::isfinite(g_[k]) || g_[k] <= 0.0)
      throw SymbolError("g_hat is nonpositive or non-finite at mode " +
                        describe_mode(lattice));

    FiberMatrix A = spec_.A_hat(xi);
    if (A.rows() != long(n) || A.cols() != long(n))
      throw SymbolError("A_hat has the wrong shape at mode " + describe_mode(lattice));
    if (!A.allFinite())
      throw SymbolError("A_hat is non-finite at mode " + describe_mode(lattice));
    double scale = A.cwiseAbs().maxCoeff();
    double asym = (A - A.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTolerance * std::max(scale, 1e-300) && asym > 0.0)
      throw SymbolError("A_hat is not Hermitian at mode " + describe_mode(lattice));
    Eigen::Map<RowMajorMatrix>(A_.data() + k * n * n, long(n), long(n)) = A;
    for (long i = 0; i < long(n); ++i)
      for (long j = 0; j < long(n); ++j)
        if (i != j && A(i, j) != Complex(0.0)) diagonal_ = false;
  }

  if (!diagonal_) basis_.resize(modes * n * n);

  Eigen::SelfAdjointEigenSolver<FiberMatrix> solver;
  for (std::size_t k = 0; k < modes; ++k) {
    FiberMatrix gen = generator(k);
    double *lam = lambda_.data() + k * n;
    if (diagonal_) {
      for (std::size_t j = 0; j < n; ++j) lam[j] = gen(long(j), long(j)).real();
    } else {
      solver.compute(gen);
      if (solver.info() != Eigen::Success)
        throw SymbolError("eigendecomposition failed at mode " +
                          describe_mode(grid_.wave_numbers(k)));
      for (std::size_t j = 0; j < n; ++j) lam[j] = solver.eigenvalues()(long(j));
      Eigen::Map<RowMajorMatrix>(basis_.data() + k * n * n, long(n), long(n)) =
          solver.eigenvectors();
    }

    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j) radius = std::max(radius, std::abs(lam[j]));
    bool degenerate = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (lam[j] < -kClampTolerance * radius)
        throw SymbolError("a_hat|xi|^2 + A_hat has a negative eigenvalue " +
                          std::to_string(lam[j]) + " at mode " +
                          describe_mode(grid_.wave_numbers(k)));
      lam[j] = std::max(lam[j], 0.0);
      eta_[k * n + j] = std::sqrt(lam[j]);
      if (lam[j] == 0.0) degenerate = true;
    }
    if (degenerate) degenerate_.push_back(k);
  }
}

FiberMatrix SymbolTable::A(std::size_t mode) const {
  const long n = long(grid_.fiber());
  return Eigen::Map<const RowMajorMatrix>(A_.data() + mode * grid_.fiber() * grid_.fiber(),
                                          n, n);
}

FiberMatrix SymbolTable::basis(std::size_t mode) const {
  const long n = long(grid_.fiber());
  if (diagonal_) return FiberMatrix::Identity(n, n);
  return Eigen::Map<const RowMajorMatrix>(
      basis_.data() + mode * grid_.fiber() * grid_.fiber(), n, n);
}

FiberMatrix SymbolTable::generator(std::size_t mode) const {
  FiberMatrix gen = A(mode);
  gen.diagonal().array() += a_[mode] * xi_sq_[mode];
  return gen;
}

void SymbolTable::to_eigenbasis(std::size_t mode, std::span<const Complex> in,
                                std::span<Complex> out) const {
  const std::size_t n = grid_.fiber();
  if (diagonal_) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const Complex *q = basis_.data() + mode * n * n;
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(q[i * n + j]) * in[i];
    out[j] = acc;
  }
}

void SymbolTable::from_eigenbasis(std::size_t mode, std::span<const Complex> in,
                                  std::span<Complex> out) const {
  const std::size_t n = grid_.fiber();
  if (diagonal_) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const Complex *q = basis_.data() + mode * n * n;
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += q[i * n + j] * in[j];
    out[i] = acc;
  }
}

Field SymbolTable::to_eigenbasis(const Field &spectral) const {
  require_same_grid(grid_, spectral.grid(), "to_eigenbasis");
  if (diagonal_) return spectral;
  Field out = spectral.zeros_like();
  for (std::size_t k = 0; k < grid_.size(); ++k)
    to_eigenbasis(k, spectral.at(k), out.at(k));
  return out;
}

Field SymbolTable::from_eigenbasis(const Field &spectral) const {
  require_same_grid(grid_, spectral.grid(), "from_eigenbasis");
  if (diagonal_) return spectral;
  Field out = spectral.zeros_like();
  for (std::size_t k = 0; k < grid_.size(); ++k)
    from_eigenbasis(k, spectral.at(k), out.at(k));
  return out;
}

SymbolTable build_symbol_table(const Grid &grid, const SymbolSpec &spec) {
  return SymbolTable(grid, spec);
}

std::vector<Complex> eta_apply(const SymbolTable &table, std::size_t mode,
                               std::span<const Complex> w, double p) {
  const std::size_t n = table.grid().fiber();
  if (w.size() != n) throw SymbolError("eta_apply: fiber vector has wrong length");
  auto eta = table.eta(mode);
  if (p < 0.0)
    for (double e : eta)
      if (e == 0.0) throw SingularModeError(mode, table.grid().wave_numbers(mode));
  std::vector<Complex> tmp(n), out(n);
  table.to_eigenbasis(mode, w, tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] *= p == 0.0 ? 1.0 : std::pow(eta[j], p);
  table.from_eigenbasis(mode, tmp, out);
  return out;
}

Field eta_apply(const SymbolTable &table, const Field &spectral, double p) {
  require_same_grid(table.grid(), spectral.grid(), "eta_apply");
  if (spectral.representation() != Representation::spectral)
    throw GridError("eta_apply expects a spectral field");
  Field out = spectral.zeros_like();
  for (std::size_t k = 0; k < table.grid().size(); ++k) {
    auto r = eta_apply(table, k, spectral.at(k), p);
    std::copy(r.begin(), r.end(), out.at(k).begin());
  }
  return out;
}

KernelDecayReport check_kernel_decay(const SymbolTable &table, double r,
                                     double C_g) {
  if (r < 0.0 || !(C_g > 0.0))
    throw SymbolError("check_kernel_decay needs r >= 0 and C_g > 0");
  KernelDecayReport report;
  const Grid &grid = table.grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double bound = C_g * std::pow(1.0 + table.xi_sq(k), -0.5 * r);
    double ratio = table.g(k) / bound;
    report.max_ratio = std::max(report.max_ratio, ratio);
    // one part in 1e12 absorbs rounding in the equality case
    if (ratio > 1.0 + 1e-12) {
      report.passed = false;
      report.violations.push_back({k, grid.wave_numbers(k), ratio});
    }
  }
  return report;
}

DerivativeBoundReport check_symbol_derivative_bound(const SymbolTable &table,
                                                    double M_bound) {
  DerivativeBoundReport report;
  const Grid &grid = table.grid();
  const double h = grid.mode_spacing();
  const long n = long(grid.fiber());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto eta = table.eta(k);
    if (std::any_of(eta.begin(), eta.end(), [](double e) { return e == 0.0; })) {
      report.skipped_modes.push_back(k);
      continue;
    }
    FiberMatrix Q = table.basis(k);
    Eigen::VectorXd inv(n);
    for (long j = 0; j < n; ++j) inv(j) = 1.0 / eta[std::size_t(j)];
    FiberMatrix eta_inv = Q * inv.asDiagonal() * Q.adjoint();

    const Frequency xi = grid.xi(k);
    for (int axis = 0; axis < grid.dim(); ++axis) {
      Frequency plus = xi, minus = xi;
      plus[std::size_t(axis)] += h;
      minus[std::size_t(axis)] -= h;
      FiberMatrix dA = (table.spec().A_hat(plus) - table.spec().A_hat(minus)) / (2.0 * h);
      double ratio = operator_norm(dA * eta_inv);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.worst_mode = k;
      }
    }
  }
  report.passed = report.max_ratio <= M_bound;
  return report;
}

} // namespace nlwave
