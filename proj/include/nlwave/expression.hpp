#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nlwave {

class ExpressionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Values a symbol expression may reference.
struct SymbolVariables {
  double xi_sq = 0.0; // |xi|^2
  double xi_x = 0.0;
  double xi_y = 0.0;
};

/// Real arithmetic expression in the frequency variables, parsed once and
/// evaluated per mode.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numeric
/// literals, the constant `pi`, variables `xi_sq`, `xi_x`, `xi_y`, `abs_xi`,
/// and the functions sqrt exp log sin cos tanh abs.
class Expression {
public:
  explicit Expression(std::string_view source);

  double operator()(const SymbolVariables &vars) const;
  const std::string &source() const { return source_; }

  struct Node;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

} // namespace nlwave
