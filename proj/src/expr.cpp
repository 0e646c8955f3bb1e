#include "finsler/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>

namespace finsler {
namespace {

const std::set<std::string, std::less<>> kFunctions = {"exp", "log", "sin", "cos", "sqrt", "atan", "abs"};

struct Token {
  enum class Type { number, ident, op, lparen, rparen, end } type;
  std::string text;
  double number = 0.0;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = i;
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      Token t{Token::Type::number, std::string(text.substr(start, i - start)), 0.0, start};
      const auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, t.number);
      if (ec != std::errc() || ptr != text.data() + i) throw SyntaxError(start, "malformed number '" + t.text + "'");
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      out.push_back({Token::Type::ident, std::string(text.substr(start, i - start)), 0.0, start});
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        out.push_back({Token::Type::op, std::string(1, c), 0.0, i});
        break;
      case '(': out.push_back({Token::Type::lparen, "(", 0.0, i}); break;
      case ')': out.push_back({Token::Type::rparen, ")", 0.0, i}); break;
      default: throw SyntaxError(i, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Token::Type::end, "", 0.0, text.size()});
  return out;
}

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::binary;
  n->op = op;
  n->children = {std::move(a), std::move(b)};
  return n;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::set<std::string>& vars) : toks_(std::move(tokens)), vars_(vars) {}

  NodePtr parse_all() {
    NodePtr e = parse_binary(0);
    if (peek().type != Token::Type::end) throw SyntaxError(peek().offset, "unexpected token '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  static int binding_power(const Token& t) {
    if (t.type != Token::Type::op) return -1;
    switch (t.text[0]) {
      case '+': case '-': return 1;
      case '*': case '/': return 2;
      default: return -1;  // '^' handled inside parse_power
    }
  }

  // Precedence climbing over the left-associative additive/multiplicative levels.
  NodePtr parse_binary(int min_bp) {
    NodePtr lhs = parse_unary();
    while (true) {
      const Token& t = peek();
      const int bp = binding_power(t);
      if (bp < 0 || bp < min_bp) break;
      next();
      NodePtr rhs = parse_binary(bp + 1);
      lhs = make_binary(t.text[0], std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (peek().type == Token::Type::op && peek().text == "-") {
      next();
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Kind::unary;
      n->op = '-';
      n->children = {parse_unary()};
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (peek().type == Token::Type::op && peek().text == "^") {
      next();
      // right-associative; the exponent may carry its own unary minus
      NodePtr exponent = parse_unary();
      return make_binary('^', std::move(base), std::move(exponent));
    }
    return base;
  }

  NodePtr parse_primary() {
    const Token& t = next();
    switch (t.type) {
      case Token::Type::number: {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::constant;
        n->value = t.number;
        return n;
      }
      case Token::Type::ident: {
        if (peek().type == Token::Type::lparen) {
          if (!kFunctions.contains(t.text)) throw Error(Errc::unknown_identifier, "unknown function '" + t.text + "'");
          next();
          NodePtr arg = parse_binary(0);
          expect_rparen();
          auto n = std::make_shared<Expr::Node>();
          n->kind = Expr::Kind::call;
          n->name = t.text;
          n->children = {std::move(arg)};
          return n;
        }
        if (!vars_.contains(t.text)) throw Error(Errc::unknown_identifier, "undeclared identifier '" + t.text + "'");
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::variable;
        n->name = t.text;
        return n;
      }
      case Token::Type::lparen: {
        NodePtr e = parse_binary(0);
        expect_rparen();
        return e;
      }
      case Token::Type::end: throw SyntaxError(t.offset, "unexpected end of input");
      default: throw SyntaxError(t.offset, "expected operand, found '" + t.text + "'");
    }
  }

  void expect_rparen() {
    if (peek().type != Token::Type::rparen) throw SyntaxError(peek().offset, "expected ')'");
    next();
  }

  std::vector<Token> toks_;
  const std::set<std::string>& vars_;
  std::size_t pos_ = 0;
};

void collect(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Expr::Kind::variable) out.insert(n.name);
  for (const auto& c : n.children) collect(*c, out);
}

bool equal(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind || a.op != b.op || a.name != b.name || a.children.size() != b.children.size()) return false;
  if (a.kind == Expr::Kind::constant && a.value != b.value) return false;
  for (std::size_t k = 0; k < a.children.size(); ++k)
    if (!equal(*a.children[k], *b.children[k])) return false;
  return true;
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Expr::Kind::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Expr::Kind::variable: out += n.name; return;
    case Expr::Kind::unary:
      out += "(-";
      print_node(*n.children[0], out);
      out += ')';
      return;
    case Expr::Kind::call:
      out += n.name;
      out += '(';
      print_node(*n.children[0], out);
      out += ')';
      return;
    case Expr::Kind::binary:
      out += '(';
      print_node(*n.children[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(*n.children[1], out);
      out += ')';
      return;
  }
}

}  // namespace

std::set<std::string> Expr::variables() const {
  std::set<std::string> out;
  if (root_) collect(*root_, out);
  return out;
}

bool Expr::structurally_equal(const Expr& other) const {
  if (!root_ || !other.root_) return !root_ && !other.root_;
  return equal(*root_, *other.root_);
}

Expr parse(std::string_view text, const std::set<std::string>& allowed_vars) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw SyntaxError(0, "empty expression");
  Parser p(tokenize(text), allowed_vars);
  return Expr(p.parse_all());
}

std::string print(const Expr& e) {
  std::string out;
  if (!e.empty()) print_node(e.root(), out);
  return out;
}

namespace detail {

double constant_value(const Expr::Node& n) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (n.kind == Expr::Kind::variable) return nan;
  for (const auto& c : n.children)
    if (std::isnan(constant_value(*c))) return nan;
  try {
    Bindings<double> none;
    return eval_node<double>(n, none, 0.0);
  } catch (const Error&) {
    return nan;
  }
}

}  // namespace detail
}  // namespace finsler
