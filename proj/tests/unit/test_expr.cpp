#include <doctest.h>

#include <random>

#include "qcgeom/errors.hpp"
#include "qcgeom/expr.hpp"

using namespace qcgeom;

namespace {

ExprNode var(int i) { return ExprNode::variable(i); }
ExprNode num(double v) { return ExprNode::constant(v); }

ExprNode random_ast(std::mt19937_64& rng, int depth, int dim) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth == 0) {
    return pick(rng) < 5 ? var(std::uniform_int_distribution<int>(0, dim - 1)(rng))
                         : num(std::uniform_real_distribution<double>(0.0, 10.0)(rng));
  }
  static const ExprKind unary[] = {ExprKind::Neg, ExprKind::Sin,  ExprKind::Cos,  ExprKind::Sinh,
                                   ExprKind::Cosh, ExprKind::Tanh, ExprKind::Exp,  ExprKind::Log,
                                   ExprKind::Sqrt, ExprKind::Atan, ExprKind::FlatStep};
  static const ExprKind binary[] = {ExprKind::Add, ExprKind::Sub, ExprKind::Mul, ExprKind::Div};
  const int choice = pick(rng);
  if (choice < 3) return ExprNode::unary(unary[std::uniform_int_distribution<int>(0, 10)(rng)], random_ast(rng, depth - 1, dim));
  if (choice < 8) {
    return ExprNode::binary(binary[std::uniform_int_distribution<int>(0, 3)(rng)], random_ast(rng, depth - 1, dim),
                            random_ast(rng, depth - 1, dim));
  }
  if (choice == 8) {
    // constant exponent; negative ones appear as Neg(constant)
    const double e = std::uniform_int_distribution<int>(-3, 4)(rng) * 0.5;
    const ExprNode ex = e < 0 ? ExprNode::unary(ExprKind::Neg, num(-e)) : num(e);
    return ExprNode::binary(ExprKind::Pow, random_ast(rng, depth - 1, dim), ex);
  }
  return random_ast(rng, 0, dim);
}

}  // namespace

TEST_CASE("parse_expr: grammar cases") {
  CHECK(parse_expr("sin(x0)^2", 3) == ExprNode::binary(ExprKind::Pow, ExprNode::unary(ExprKind::Sin, var(0)), num(2)));
  CHECK(parse_expr("cosh(x1)*cosh(x1)", 2) ==
        ExprNode::binary(ExprKind::Mul, ExprNode::unary(ExprKind::Cosh, var(1)), ExprNode::unary(ExprKind::Cosh, var(1))));
  // ^ binds tighter than unary minus and is right associative
  CHECK(parse_expr("-x0^2", 2) == ExprNode::unary(ExprKind::Neg, ExprNode::binary(ExprKind::Pow, var(0), num(2))));
  CHECK(parse_expr("x0^3^2", 2) ==
        ExprNode::binary(ExprKind::Pow, var(0), ExprNode::binary(ExprKind::Pow, num(3), num(2))));
  CHECK(parse_expr("x0^-1", 2) == ExprNode::binary(ExprKind::Pow, var(0), ExprNode::unary(ExprKind::Neg, num(1))));
  CHECK(parse_expr("1 - x0 - x1", 2) ==
        ExprNode::binary(ExprKind::Sub, ExprNode::binary(ExprKind::Sub, num(1), var(0)), var(1)));
  CHECK(parse_expr("x0 / x1 * 2", 2) ==
        ExprNode::binary(ExprKind::Mul, ExprNode::binary(ExprKind::Div, var(0), var(1)), num(2)));
  CHECK(parse_expr("  2.5e-1 ", 2) == num(0.25));
}

TEST_CASE("parse_expr: aliases and pi") {
  const std::vector<std::string> names{"r", "theta"};
  CHECK(parse_expr("r*sin(theta)", 2, names) ==
        ExprNode::binary(ExprKind::Mul, var(0), ExprNode::unary(ExprKind::Sin, var(1))));
  CHECK(parse_expr("theta + x0", 2, names) == ExprNode::binary(ExprKind::Add, var(1), var(0)));
  const ExprNode p = parse_expr("pi", 2);
  REQUIRE(is_constant_expr(p));
  CHECK(fold_constant(p) == doctest::Approx(3.14159265358979).epsilon(1e-14));
}

TEST_CASE("parse_expr: errors") {
  SUBCASE("incomplete expression reports the offset") {
    try {
      parse_expr("x0 + ", 3);
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 5);
    }
  }
  CHECK_THROWS_AS(parse_expr("x3", 3), UnknownIdentifier);
  CHECK_THROWS_AS(parse_expr("x01", 3), UnknownIdentifier);
  CHECK_THROWS_AS(parse_expr("foo(x0)", 3), UnknownIdentifier);
  CHECK_THROWS_AS(parse_expr("sin x0", 3), ArityError);
  CHECK_THROWS_AS(parse_expr("sin()", 3), ArityError);
  CHECK_THROWS_AS(parse_expr("sin(x0, x1)", 3), ArityError);
  CHECK_THROWS_AS(parse_expr("x0^x1", 3), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(x0", 3), SyntaxError);
  CHECK_THROWS_AS(parse_expr("", 3), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x0 $ 1", 3), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x0", 1), InputError);
  CHECK_THROWS_AS(parse_expr("x0", 7), InputError);
}

TEST_CASE("parse_expr: canonical print round-trips") {
  std::mt19937_64 rng(20240611);
  for (int t = 0; t < 500; ++t) {
    const int dim = 2 + t % 5;
    const ExprNode ast = random_ast(rng, 1 + t % 6, dim);
    const std::string text = to_string(ast);
    INFO(text);
    const ExprNode back = parse_expr(text, dim);
    CHECK(back == ast);
    CHECK(to_string(back) == text);
  }
}

TEST_CASE("max_variable and constant folding") {
  CHECK(max_variable(parse_expr("x0 + x3*2", 5)) == 3);
  CHECK(max_variable(parse_expr("2*pi", 5)) == -1);
  CHECK(fold_constant(parse_expr("2^3 - 1/4", 2)) == doctest::Approx(7.75));
}
