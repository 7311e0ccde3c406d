#include "nlwave/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace nlwave {

struct Expression::Node {
  enum class Kind { constant, variable, unary, binary, call } kind;
  double value = 0.0;
  std::function<double(const SymbolVariables &)> variable;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const SymbolVariables &v) const {
    switch (kind) {
    case Kind::constant: return value;
    case Kind::variable: return variable(v);
    case Kind::unary: return -lhs->eval(v);
    case Kind::call: return fn(lhs->eval(v));
    case Kind::binary: {
      double a = lhs->eval(v), b = rhs->eval(v);
      switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
      }
    }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected character");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw ExpressionError("expression '" + std::string(src_) + "': " + what +
                          " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+')) n = binary('+', n, term());
      else if (accept('-')) n = binary('-', n, term());
      else return n;
    }
  }

  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (accept('*')) n = binary('*', n, unary());
      else if (accept('/')) n = binary('/', n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::unary;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ = std::size_t(ptr - src_.data());
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    auto n = std::make_shared<Node>();

    if (name == "pi") {
      n->kind = Node::Kind::constant;
      n->value = std::numbers::pi;
      return n;
    }
    n->kind = Node::Kind::variable;
    if (name == "xi_sq") n->variable = [](const SymbolVariables &v) { return v.xi_sq; };
    else if (name == "xi_x") n->variable = [](const SymbolVariables &v) { return v.xi_x; };
    else if (name == "xi_y") n->variable = [](const SymbolVariables &v) { return v.xi_y; };
    else if (name == "abs_xi")
      n->variable = [](const SymbolVariables &v) { return std::sqrt(v.xi_sq); };
    else {
      double (*fn)(double) = nullptr;
      if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
      else if (name == "exp") fn = [](double x) { return std::exp(x); };
      else if (name == "log") fn = [](double x) { return std::log(x); };
      else if (name == "sin") fn = [](double x) { return std::sin(x); };
      else if (name == "cos") fn = [](double x) { return std::cos(x); };
      else if (name == "tanh") fn = [](double x) { return std::tanh(x); };
      else if (name == "abs") fn = [](double x) { return std::abs(x); };
      else fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      n->kind = Node::Kind::call;
      n->fn = fn;
      n->lhs = expr();
      if (!accept(')')) fail("expected ')'");
    }
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

} // namespace

Expression::Expression(std::string_view source)
    : source_(source), root_(Parser(source).parse()) {}

double Expression::operator()(const SymbolVariables &vars) const {
  return root_->eval(vars);
}

} // namespace nlwave
