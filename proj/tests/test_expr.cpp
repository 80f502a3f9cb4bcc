#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "weil/expr.hpp"

using namespace weil;
using namespace weil::testgen;

namespace {
const std::vector<std::string> xy{"x", "y"};
const std::vector<std::string> x1{"x"};
}  // namespace

TEST_CASE("parse examples") {
  SECTION("x^2 + 3*y") {
    const Expr e = parse_expr("x^2 + 3*y", xy);
    REQUIRE(e.kind() == Expr::Kind::Add);
    CHECK(e.child(0).kind() == Expr::Kind::Pow);
    CHECK(e.child(0).child(0).var() == 0);
    CHECK(e.child(0).exponent() == 2);
    CHECK(e.child(1).kind() == Expr::Kind::Mul);
    CHECK(e.child(1).child(0).value() == Rat(3));
    CHECK(e.child(1).child(1).var() == 1);
  }
  SECTION("exp(x)*sin(y)") {
    const Expr e = parse_expr("exp(x)*sin(y)", xy);
    REQUIRE(e.kind() == Expr::Kind::Mul);
    CHECK(e.child(0).kind() == Expr::Kind::Call);
    CHECK(e.child(0).fn() == Fn::Exp);
    CHECK(e.child(1).fn() == Fn::Sin);
  }
  SECTION("syntax error reports the position") {
    try {
      parse_expr("x + * y", xy);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == Err::ParseError);
      CHECK(std::string(e.what()).find("position 4") != std::string::npos);
    }
  }
  SECTION("unknown identifier") {
    CHECK_THROWS_AS(parse_expr("x + z", xy), Error);
    CHECK_THROWS_AS(parse_expr("tan(x)", x1), Error);
  }
}

TEST_CASE("precedence: power binds tighter than unary minus") {
  // -x^2 is -(x^2)
  const Expr e = parse_expr("-x^2", x1);
  REQUIRE(e.kind() == Expr::Kind::Neg);
  CHECK(e.child(0).kind() == Expr::Kind::Pow);
  CHECK(eval_exact(e, {Rat(3)}) == Rat(-9));

  CHECK(eval_exact(parse_expr("2 + 3 * 4", x1), {Rat(0)}) == Rat(14));
  CHECK(eval_exact(parse_expr("(2 + 3) * 4", x1), {Rat(0)}) == Rat(20));
  CHECK(eval_exact(parse_expr("2 - 3 - 4", x1), {Rat(0)}) == Rat(-5));
  // the grammar allows a single power per factor
  CHECK_THROWS_AS(parse_expr("x^2^3", x1), Error);
}

TEST_CASE("number literals") {
  CHECK(parse_expr("3/4", x1).value() == Rat(3, 4));     // rational literal
  CHECK(parse_expr("1.5", x1).value() == Rat(3, 2));     // decimal
  CHECK(eval_exact(parse_expr("1/2 * x", x1), {Rat(4)}) == Rat(2));
  // x/2 stays a Div node: not polynomial, but exactly evaluable.
  const Expr e = parse_expr("x/2", x1);
  CHECK(e.kind() == Expr::Kind::Div);
  CHECK_FALSE(is_polynomial(e));
  // x^2/3 parses as (x^2)/3, not x^(2/3)
  CHECK(eval_exact(parse_expr("x^2/3", x1), {Rat(3)}) == Rat(3));
  // division by the zero literal is not folded, it surfaces at evaluation
  CHECK_THROWS_AS(eval_exact(parse_expr("1/0", x1), {Rat(0)}), Error);
}

TEST_CASE("printer round-trips") {
  const std::vector<std::string> exprs = {
      "x^2 + 3*y", "exp(x)*sin(y)", "-x^2", "1/2*x", "(x + y)^3", "x/(1 - y)",
      "sqrt(1 + x^2)", "cos(x) - sin(y)", "x*y*x", "2 - 3 - 4"};
  for (const std::string& s : exprs) {
    const Expr e = parse_expr(s, xy);
    const std::string printed = expr_to_string(e, xy);
    const Expr re = parse_expr(printed, xy);
    CHECK(expr_to_string(re, xy) == printed);
  }
}

TEST_CASE("printer round-trip on random polynomials", "[property]") {
  Rng rng(501);
  for (int i = 0; i < 50; ++i) {
    const Expr e = random_poly_expr(rng, 2);
    const std::string s1 = expr_to_string(e, xy);
    const Expr re = parse_expr(s1, xy);
    CHECK(expr_to_string(re, xy) == s1);
    // and the reparse evaluates identically
    const std::vector<Rat> at{Rat(2, 3), Rat(-1, 2)};
    CHECK(eval_exact(e, at) == eval_exact(re, at));
  }
}

TEST_CASE("polynomial classification and degree bounds") {
  CHECK(is_polynomial(parse_expr("x^3 - 2*x + 1", x1)));
  CHECK_FALSE(is_polynomial(parse_expr("exp(x)", x1)));
  CHECK_FALSE(is_polynomial(parse_expr("x/(1+x)", x1)));
  CHECK(degree_bound(parse_expr("x^3 - 2*x + 1", x1)) == 3);
  CHECK(degree_bound(parse_expr("(x*y)^2", xy)) == 4);
}

TEST_CASE("exact and double evaluation agree on rationals") {
  Rng rng(502);
  for (int i = 0; i < 30; ++i) {
    const Expr e = random_poly_expr(rng, 2);
    const Rat a = random_rat(rng), b = random_rat(rng);
    const Rat exact = eval_exact(e, {a, b});
    const double approx = eval_double(e, {a.to_double(), b.to_double()});
    CHECK(std::abs(exact.to_double() - approx) <
          1e-9 * std::max(1.0, std::abs(exact.to_double())));
  }
}

TEST_CASE("domain errors in double evaluation") {
  CHECK_THROWS_AS(eval_double(parse_expr("log(x)", x1), {-1.0}), Error);
  CHECK_THROWS_AS(eval_double(parse_expr("sqrt(x)", x1), {-1.0}), Error);
  CHECK_THROWS_AS(eval_double(parse_expr("1/x", x1), {0.0}), Error);
}

TEST_CASE("substitution composes expressions") {
  const Expr f = parse_expr("x^2 + y", xy);
  const Expr gx = parse_expr("x + 1", x1);
  const Expr gy = parse_expr("x - 1", x1);
  const Expr h = substitute(f, {gx, gy});
  // (x+1)^2 + (x-1) = x^2 + 3x at x = 2 -> 10
  CHECK(eval_exact(h, {Rat(2)}) == Rat(10));
}
