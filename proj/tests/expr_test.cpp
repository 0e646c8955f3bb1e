#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "finsler/expr.hpp"

using namespace finsler;

namespace {

const std::set<std::string> kVars = {"x1", "x2", "x3"};

double eval_at(const std::string& text, double x1, double x2 = 0.0) {
  Bindings<double> b{{"x1", x1}, {"x2", x2}, {"x3", 0.0}};
  return eval_expr(parse(text, kVars), b);
}

}  // namespace

TEST(Parse, DivisionOfPower) {
  auto e = parse("2/x2^2", kVars);
  const auto& r = e.root();
  ASSERT_EQ(r.kind, Expr::Kind::binary);
  EXPECT_EQ(r.op, '/');
  EXPECT_EQ(r.children[0]->kind, Expr::Kind::constant);
  EXPECT_EQ(r.children[0]->value, 2.0);
  EXPECT_EQ(r.children[1]->op, '^');
  EXPECT_EQ(r.children[1]->children[0]->name, "x2");
}

TEST(Parse, FunctionCall) {
  auto e = parse("exp(2*x1)", kVars);
  const auto& r = e.root();
  ASSERT_EQ(r.kind, Expr::Kind::call);
  EXPECT_EQ(r.name, "exp");
  EXPECT_EQ(r.children[0]->op, '*');
  EXPECT_EQ(e.variables(), std::set<std::string>{"x1"});
}

TEST(Parse, SyntaxErrorOffset) {
  try {
    parse("1 + + 2", kVars);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.code(), Errc::syntax);
  }
}

TEST(Parse, MalformedInputs) {
  for (const char* bad : {"", "(x1", "x1)", "2 3", "sin()", "exp(x1,x2)", "1.2.3", "x1 ^"})
    EXPECT_THROW(parse(bad, kVars), SyntaxError) << bad;
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse("x1 + y", kVars);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_identifier);
  }
  EXPECT_THROW(parse("foo(x1)", kVars), Error);
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(eval_at("2^3^2", 0), 512.0);
  EXPECT_DOUBLE_EQ(eval_at("-2^2", 0), -4.0);
  EXPECT_DOUBLE_EQ(eval_at("1 - 2 - 3", 0), -4.0);
  EXPECT_DOUBLE_EQ(eval_at("8 / 4 / 2", 0), 1.0);
  EXPECT_DOUBLE_EQ(eval_at("1 + 2 * 3", 0), 7.0);
  EXPECT_DOUBLE_EQ(eval_at("2e-1 * 10", 0), 2.0);
}

TEST(Eval, Polynomial) { EXPECT_DOUBLE_EQ(eval_at("x1*x1+1", 3.0), 10.0); }

TEST(Eval, SqrtJet) {
  Bindings<JetScalar> b{{"x1", jet_variable(0, 4.0, 1, 2)}};
  auto j = eval_expr(parse("sqrt(x1)", {"x1"}), b);
  EXPECT_NEAR(j.coeffs()[0], 2.0, 1e-15);
  EXPECT_NEAR(j.coeffs()[1], 0.25, 1e-15);
  EXPECT_NEAR(j.coeffs()[2], -1.0 / 64.0, 1e-15);
}

TEST(Eval, DivisionByZero) {
  try {
    eval_at("1/x1", 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::domain);
  }
}

TEST(Eval, UnboundVariable) {
  Bindings<double> b{{"x1", 1.0}};
  try {
    eval_expr(parse("x1 + x2", kVars), b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unbound_variable);
  }
}

TEST(Eval, JetAgreesWithDouble) {
  const std::string text = "exp(2*x1) * sin(x2) / (1 + x1^2) + atan(x1*x2) - log(2 + cos(x2))";
  auto e = parse(text, kVars);
  Bindings<JetScalar> b{{"x1", jet_variable(0, 0.4, 2, 2)}, {"x2", jet_variable(1, -0.3, 2, 2)}};
  auto j = eval_expr(e, b);
  EXPECT_NEAR(j.value(), eval_at(text, 0.4, -0.3), 1e-14);
  const double h = 1e-5;
  EXPECT_NEAR(j.derivative({1, 0}), (eval_at(text, 0.4 + h, -0.3) - eval_at(text, 0.4 - h, -0.3)) / (2 * h), 1e-8);
}

TEST(Print, RoundTripRandom) {
  std::mt19937_64 rng(42);
  const char* leaves[] = {"x1", "x2", "2", "0.5", "x3"};
  const char* ops[] = {"+", "-", "*", "/", "^"};
  const char* fns[] = {"exp", "sin", "cos", "sqrt", "atan", "abs", "log"};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth == 0) return leaves[rng() % 5];
    switch (rng() % 3) {
      case 0: return "(" + gen(depth - 1) + ops[rng() % 5] + gen(depth - 1) + ")";
      case 1: return std::string(fns[rng() % 7]) + "(" + gen(depth - 1) + ")";
      default: return "-" + gen(depth - 1);
    }
  };
  for (int i = 0; i < 200; ++i) {
    auto e = parse(gen(4), kVars);
    auto back = parse(print(e), kVars);
    EXPECT_TRUE(e.structurally_equal(back)) << print(e);
    EXPECT_EQ(print(back), print(e));
  }
}
