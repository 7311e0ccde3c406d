#pragma once

#include "nlwave/symbols.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace nlwave {

class NonlinearityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Pointwise fiber map f: C^N -> C^N with optional potential G (f = grad G)
/// and derivative envelope fbar(sigma) = max_{|u| <= sigma} max_k ||D^k f(u)||.
struct NonlinearitySpec {
  using Map = std::function<void(std::span<const Complex>, std::span<Complex>)>;
  using Potential = std::function<Complex(std::span<const Complex>)>;
  using Envelope = std::function<double(double)>;

  std::string name = "none";
  std::size_t fiber = 1;
  Map f;                 // empty means f == 0
  Potential potential;   // required for energy with nonzero f
  Envelope envelope;     // closed form; sampled lower bound when empty
  double alpha = 0.0;    // f(u) = O(|u|^{alpha+1}) near 0
  int derivative_order = 2;

  bool is_zero() const { return !f; }
  /// Throws NonlinearityError if f(0) != 0 or the map is malformed.
  void validate() const;
};

namespace presets {

NonlinearitySpec no_nonlinearity(std::size_t fiber);
/// u_j -> c u_j^m componentwise (holomorphic power), G = c sum u_j^{m+1}/(m+1).
NonlinearitySpec power(std::size_t fiber, double coefficient, int exponent,
                       int derivative_order = 2);
/// u_j -> c u_j |u_j|^{m-1} componentwise, for real-valued fields.
NonlinearitySpec signed_power(std::size_t fiber, double coefficient,
                              int exponent, int derivative_order = 2);

} // namespace presets

/// Spectral transform of the pointwise map f(u); the field is converted to
/// physical space first.
Field nonlinear_term(const Field &u, const NonlinearitySpec &spec);

/// -|xi|^2 g_hat(xi) f_hat(u)(xi), the spectral form of Delta[g * f(u)].
/// The zero mode is exactly 0.
Field nonlinear_rhs(const Field &u, const NonlinearitySpec &spec,
                    const SymbolTable &table);

struct EnvelopeValue {
  double value = 0.0;
  bool lower_bound = false; // sampled rather than closed form
};

EnvelopeValue fbar_eval(const NonlinearitySpec &spec, double sigma);

/// Sampled estimate of fbar from finite-difference directional derivatives
/// at `samples` points of the ball |u| <= sigma.
double sampled_envelope(const NonlinearitySpec &spec, double sigma,
                        std::size_t samples = 1000);

} // namespace nlwave
