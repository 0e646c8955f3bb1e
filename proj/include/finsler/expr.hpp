#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

/// Immutable expression tree produced by parse(). Nodes are shared, so copies
/// are cheap.
class Expr {
 public:
  enum class Kind { constant, variable, unary, binary, call };

  struct Node {
    Kind kind;
    double value = 0.0;         // constant
    std::string name;           // variable or function name
    char op = 0;                // unary '-' or binary + - * / ^
    std::vector<std::shared_ptr<const Node>> children;
  };

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }
  /// Variables referenced anywhere in the tree.
  std::set<std::string> variables() const;
  bool structurally_equal(const Expr& other) const;

 private:
  std::shared_ptr<const Node> root_;
};

/// Parses infix text. Precedence: ^ (right-assoc) > unary minus > * / > + -.
/// Functions: exp log sin cos sqrt atan abs. Identifiers outside
/// `allowed_vars` raise UnknownIdentifier; malformed input raises SyntaxError
/// with the byte offset of the offending token.
Expr parse(std::string_view text, const std::set<std::string>& allowed_vars);

/// Fully parenthesised canonical form; parse(print(e)) is structurally equal to e.
std::string print(const Expr& e);

template <class Scalar>
using Bindings = std::map<std::string, Scalar, std::less<>>;

namespace detail {

inline double checked_div(double a, double b) {
  if (std::abs(b) <= 1e-300) fail(Errc::domain, "division by ~0");
  return a / b;
}
inline JetScalar checked_div(const JetScalar& a, const JetScalar& b) { return a / b; }

inline double apply_call(const std::string& fn, double a) {
  if (fn == "exp") return std::exp(a);
  if (fn == "log") {
    if (a <= 0.0) fail(Errc::domain, "log of non-positive value");
    return std::log(a);
  }
  if (fn == "sin") return std::sin(a);
  if (fn == "cos") return std::cos(a);
  if (fn == "sqrt") {
    if (a < 0.0) fail(Errc::domain, "sqrt of negative value");
    return std::sqrt(a);
  }
  if (fn == "atan") return std::atan(a);
  if (fn == "abs") return std::abs(a);
  fail(Errc::unknown_identifier, fn);
}

inline JetScalar apply_call(const std::string& fn, const JetScalar& a) {
  if (fn == "exp") return exp(a);
  if (fn == "log") return log(a);
  if (fn == "sin") return sin(a);
  if (fn == "cos") return cos(a);
  if (fn == "sqrt") return sqrt(a);
  if (fn == "atan") return atan(a);
  if (fn == "abs") return abs(a);
  fail(Errc::unknown_identifier, fn);
}

inline double int_power(double base, int p) {
  if (p < 0) return checked_div(1.0, int_power(base, -p));
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= base;
  return r;
}
inline JetScalar int_power(const JetScalar& base, int p) { return pow(base, p); }

inline double real_power(double base, double p) {
  if (base <= 0.0) fail(Errc::domain, "real power of non-positive value");
  return std::pow(base, p);
}
inline JetScalar real_power(const JetScalar& base, double p) { return pow(base, p); }

inline double general_power(double base, double p) { return real_power(base, p); }
inline JetScalar general_power(const JetScalar& base, const JetScalar& p) { return pow(base, p); }

inline double constant_like(double, double v) { return v; }
inline JetScalar constant_like(const JetScalar& proto, double v) { return JetScalar::constant_like(proto, v); }

/// Value of a variable-free subtree, or NaN when it references a variable.
double constant_value(const Expr::Node& n);

template <class Scalar>
Scalar eval_node(const Expr::Node& n, const Bindings<Scalar>& bindings, const Scalar& proto) {
  switch (n.kind) {
    case Expr::Kind::constant: return constant_like(proto, n.value);
    case Expr::Kind::variable: {
      auto it = bindings.find(n.name);
      if (it == bindings.end()) fail(Errc::unbound_variable, n.name);
      return it->second;
    }
    case Expr::Kind::unary: return eval_node(*n.children[0], bindings, proto) * -1.0;
    case Expr::Kind::call: return apply_call(n.name, eval_node(*n.children[0], bindings, proto));
    case Expr::Kind::binary: {
      const auto& lhs = *n.children[0];
      const auto& rhs = *n.children[1];
      if (n.op == '^') {
        const double p = constant_value(rhs);
        Scalar base = eval_node(lhs, bindings, proto);
        if (!std::isnan(p)) {
          if (p == std::floor(p) && std::abs(p) <= 64.0) return int_power(base, static_cast<int>(p));
          return real_power(base, p);
        }
        return general_power(base, eval_node(rhs, bindings, proto));
      }
      Scalar a = eval_node(lhs, bindings, proto);
      Scalar b = eval_node(rhs, bindings, proto);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return checked_div(a, b);
        default: break;
      }
      fail(Errc::syntax, std::string("unknown operator ") + n.op);
    }
  }
  fail(Errc::syntax, "corrupt expression tree");
}

}  // namespace detail

/// Evaluates over doubles or over JetScalars; with jets, derivatives
/// propagate through every node.
template <class Scalar>
Scalar eval_expr(const Expr& e, const Bindings<Scalar>& bindings) {
  if (e.empty()) fail(Errc::syntax, "empty expression");
  if constexpr (std::is_same_v<Scalar, JetScalar>) {
    if (bindings.empty()) fail(Errc::unbound_variable, "jet evaluation needs at least one binding");
    return detail::eval_node(e.root(), bindings, bindings.begin()->second);
  } else {
    return detail::eval_node(e.root(), bindings, Scalar{});
  }
}

}  // namespace finsler
