#include "graphdarcy/error.hpp"
#include "graphdarcy/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace graphdarcy;

namespace {

// Independent recursive evaluator over the tree.
double reference(const ExprNode& n, double x, double y) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number: return n.value;
    case K::X: return x;
    case K::Y: return y;
    case K::Pi: return std::numbers::pi;
    case K::Neg: return -reference(*n.lhs, x, y);
    case K::Add: return reference(*n.lhs, x, y) + reference(*n.rhs, x, y);
    case K::Sub: return reference(*n.lhs, x, y) - reference(*n.rhs, x, y);
    case K::Mul: return reference(*n.lhs, x, y) * reference(*n.rhs, x, y);
    case K::Div: return reference(*n.lhs, x, y) / reference(*n.rhs, x, y);
    case K::Pow: return std::pow(reference(*n.lhs, x, y), reference(*n.rhs, x, y));
    case K::Sin: return std::sin(reference(*n.lhs, x, y));
    case K::Cos: return std::cos(reference(*n.lhs, x, y));
    case K::Exp: return std::exp(reference(*n.lhs, x, y));
    case K::Sqrt: return std::sqrt(reference(*n.lhs, x, y));
    case K::Abs: return std::fabs(reference(*n.lhs, x, y));
  }
  return NAN;
}

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 11);
  std::uniform_real_distribution<double> num(0.1, 3.0);
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return "y";
    case 2: return "pi";
    case 3: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", num(rng));
      return buf;
    }
    case 4: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 5: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 6: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 7: return "(" + random_expr(rng, depth - 1) + ")/(2 + abs(" + random_expr(rng, depth - 1) + "))";
    case 8: return "-" + random_expr(rng, depth - 1);
    case 9: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 10: return "sqrt(abs(" + random_expr(rng, depth - 1) + "))";
    default: return "abs(" + random_expr(rng, depth - 1) + ")^1.5";
  }
}

}  // namespace

TEST(Expr, Examples) {
  EXPECT_DOUBLE_EQ(parse("1 + x*y").eval(2, 3), 7.0);
  EXPECT_DOUBLE_EQ(parse("-2^2").eval(0, 0), -4.0);
  EXPECT_NEAR(parse("sin(pi)").eval(0, 0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(parse("x").eval(3, 4), 3.0);
  EXPECT_DOUBLE_EQ(parse("exp(0)+cos(0)").eval(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(parse("2^3^2").eval(0, 0), 512.0);
  EXPECT_DOUBLE_EQ(parse("2^-1").eval(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(parse(" 8 / 4 / 2 ").eval(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(parse("1 - 2 - 3").eval(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(parse("1.5e2 + .5").eval(0, 0), 150.5);
  EXPECT_DOUBLE_EQ(parse("--x").eval(2, 0), 2.0);
  EXPECT_DOUBLE_EQ(Expr().eval(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(Expr::constant(2.5).eval(1, 1), 2.5);
}

TEST(Expr, Errors) {
  EXPECT_THROW(parse("x/0").eval(1, 1), Error);
  try {
    parse("x/0").eval(1, 1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  try {
    parse("sqrt(x)").eval(-1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  try {
    parse("1 + * 2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  try {
    parse("(1 + 2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    parse("1 + z");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownIdentifier);
  }
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("1 2"), SyntaxError);
  EXPECT_THROW(parse("sin x"), SyntaxError);
}

TEST(Expr, PrintRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Expr e = parse(random_expr(rng, 5));
    std::string s = print(e);
    Expr f = parse(s);
    EXPECT_TRUE(same_tree(e.root(), f.root())) << s;
    EXPECT_EQ(print(f), s);
  }
}

TEST(Expr, AgreesWithReferenceInterpreter) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string src = random_expr(rng, 6);
    Expr e = parse(src);
    double x = u(rng), y = u(rng);
    double want = reference(e.root(), x, y);
    if (!std::isfinite(want)) continue;
    double got = e.eval(x, y);
    EXPECT_LE(std::fabs(got - want), 1e-13 * std::max(1.0, std::fabs(want))) << src;
    ++checked;
  }
  EXPECT_GE(checked, 900);
}

TEST(Expr, DeepNesting) {
  std::string s = "x";
  for (int i = 0; i < 200; ++i) s = "(1 + " + s + ")";
  EXPECT_DOUBLE_EQ(parse(s).eval(0.5, 0), 200.5);
  s = "x";
  for (int i = 0; i < 100; ++i) s = "x + (" + s + ")";
  EXPECT_DOUBLE_EQ(parse(s).eval(1, 0), 101.0);
}
