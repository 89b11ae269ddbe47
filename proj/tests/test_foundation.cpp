#include <doctest.h>

#include "prering/decimal.hpp"
#include "prering/errors.hpp"
#include "prering/expr.hpp"
#include "prering/radical.hpp"
#include "prering/rational.hpp"
#include "prering/rng.hpp"

using namespace prering;

TEST_CASE("rational parse/format round trip") {
  CHECK(format_rat(*parse_rat("3/6")) == "1/2");
  CHECK(format_rat(*parse_rat("-4/2")) == "-2");
  CHECK(format_rat(*parse_rat("7")) == "7");
  CHECK(format_rat(*parse_rat("0/5")) == "0");
  CHECK(!parse_rat("1/0").has_value());
  CHECK(!parse_rat("").has_value());
  CHECK(!parse_rat("a/2").has_value());
  CHECK(!parse_rat("1/ 2").has_value());
}

TEST_CASE("decimal rendering truncates toward zero") {
  CHECK(format_decimal(Rat(1, 3), 5) == "0.33333");
  CHECK(format_decimal(Rat(-1, 3), 5) == "-0.33333");
  CHECK(format_decimal(Rat(5, 4), 2) == "1.25");
  CHECK(format_decimal(Rat(2), 0) == "2");
}

TEST_CASE("floor and grid helpers") {
  CHECK(floor_to_int(Rat(7, 2)) == 3);
  CHECK(floor_to_int(Rat(-7, 2)) == -4);
  CHECK(round_down_to_grid(Rat(1, 3), Int(100)) == Rat(33, 100));
  CHECK(round_down_to_grid(Rat(-1, 3), Int(100)) == Rat(-34, 100));
}

TEST_CASE("integer square roots") {
  CHECK(isqrt_floor(Int(0)) == 0);
  CHECK(isqrt_floor(Int(35)) == 5);
  CHECK(isqrt_floor(Int(36)) == 6);
  Int root;
  CHECK(is_perfect_square(Int(144), &root));
  CHECK(root == 12);
  CHECK(!is_perfect_square(Int(145)));
  CHECK(square_part(Int(8)) == 2);    // 8 = 2^2 * 2
  CHECK(square_part(Int(72)) == 6);   // 72 = 36 * 2
  CHECK(square_part(Int(7)) == 1);
  CHECK(square_part(Int(49)) == 7);
}

TEST_CASE("pi approximation brackets the known digits") {
  // 3.14159265358979323846... truncated at 20 digits.
  Rat pi20 = pi_dec(20);
  Rat lo = *parse_rat("314159265358979323845/100000000000000000000");
  Rat hi = *parse_rat("314159265358979323847/100000000000000000000");
  CHECK(pi20 > lo);
  CHECK(pi20 < hi);
}

TEST_CASE("sqrt directed rounding") {
  Rat lo = sqrt_down(Rat(2), 10);
  Rat hi = sqrt_up(Rat(2), 10);
  CHECK(lo * lo < 2);
  CHECK(hi * hi > 2);
  CHECK(hi - lo == Rat(1, pow10(10)));
  CHECK(sqrt_down(Rat(9, 4), 10) == Rat(3, 2));
  CHECK(sqrt_up(Rat(9, 4), 10) == Rat(3, 2));
}

TEST_CASE("sin/cos certified values") {
  // sin(pi/6) = 1/2 using a rational approximation of pi/6.
  Rat pi = pi_dec(40);
  Rat s = sin_dec(pi / 6, 30);
  CHECK(abs_rat(s - Rat(1, 2)) < Rat(1, pow10(25)));
  Rat c = cos_dec(Rat(0), 30);
  CHECK(abs_rat(c - Rat(1)) < Rat(1, pow10(25)));
  // Large-argument reduction: sin(10^6) = -0.34999350217...
  Rat big = sin_dec(Rat(1000000), 20);
  Rat expect = *parse_rat("-34999350217129295211/100000000000000000000");
  CHECK(abs_rat(big - expect) < Rat(1, pow10(15)));
}

TEST_CASE("radical canonicalization and comparison") {
  // sqrt(8) = 2 sqrt(2)
  Radical a = Radical::sqrt_term(Rat(8));
  Radical b = Radical::sqrt_term(Rat(2), Rat(2));
  CHECK(a == b);
  // sqrt(9/4) = 3/2 exactly rational
  Radical c = Radical::sqrt_term(Rat(9, 4));
  CHECK(c.is_rational());
  CHECK(c.rational_value() == Rat(3, 2));
  // sqrt(2) + sqrt(3) vs sqrt(10): 3.146... vs 3.162...
  Radical lhs = Radical::sqrt_term(Rat(2)) + Radical::sqrt_term(Rat(3));
  Radical rhs = Radical::sqrt_term(Rat(10));
  CHECK(Radical::compare(lhs, rhs) == -1);
  CHECK(Radical::compare(rhs, lhs) == 1);
  Radical diff = lhs - lhs;
  CHECK(diff.is_zero());
  CHECK(Radical::compare(lhs, lhs) == 0);
}

TEST_CASE("leq_sqrt exact decision") {
  CHECK(leq_sqrt(Rat(-5), Rat(0)));
  CHECK(leq_sqrt(Rat(3), Rat(9)));
  CHECK(leq_sqrt(Rat(3), Rat(10)));
  CHECK(!leq_sqrt(Rat(3), Rat(8)));
}

TEST_CASE("expression parsing and exact evaluation") {
  Expr e = Expr::parse("x^3 - 2*x + 1/2");
  CHECK(e.exact());
  CHECK(e.arity() == 1);
  CHECK(e.eval_exact({Rat(2)}) == Rat(9, 2));
  auto p = e.polynomial();
  REQUIRE(p.has_value());
  REQUIRE(p->size() == 4);
  CHECK((*p)[0] == Rat(1, 2));
  CHECK((*p)[1] == Rat(-2));
  CHECK((*p)[2] == Rat(0));
  CHECK((*p)[3] == Rat(1));

  Expr two_var = Expr::parse("x1*x2");
  CHECK(two_var.arity() == 2);
  CHECK(two_var.eval_exact({Rat(1, 2), Rat(1, 3)}) == Rat(1, 6));

  Expr lit = Expr::parse("0.25 + 1/4");
  CHECK(lit.eval_exact({}) == Rat(1, 2));

  Expr mm = Expr::parse("min(x, 1-x)");
  CHECK(mm.eval_exact({Rat(1, 4)}) == Rat(1, 4));
  CHECK(mm.eval_exact({Rat(3, 4)}) == Rat(1, 4));

  CHECK_THROWS_AS(Expr::parse("x +"), Error);
  CHECK_THROWS_AS(Expr::parse("foo(x)"), Error);
  CHECK_THROWS_AS(Expr::parse("x^"), Error);
}

TEST_CASE("interval-restricted polynomial extraction") {
  // abs/min/max of affine pieces collapse where the sign is constant.
  Expr a = Expr::parse("abs(x - 1/2)");
  CHECK(!a.polynomial().has_value());
  auto right = a.polynomial_on(Rat(1, 2), Rat(1));
  REQUIRE(right.has_value());
  CHECK(*right == std::vector<Rat>{Rat(-1, 2), Rat(1)});
  auto left = a.polynomial_on(Rat(0), Rat(1, 2));
  REQUIRE(left.has_value());
  CHECK(*left == std::vector<Rat>{Rat(1, 2), Rat(-1)});
  CHECK(!a.polynomial_on(Rat(0), Rat(1)).has_value());

  Expr mm = Expr::parse("min(x, 1-x)");
  auto mleft = mm.polynomial_on(Rat(0), Rat(1, 2));
  REQUIRE(mleft.has_value());
  CHECK(*mleft == std::vector<Rat>{Rat(0), Rat(1)});
  auto mright = mm.polynomial_on(Rat(1, 2), Rat(1));
  REQUIRE(mright.has_value());
  CHECK(*mright == std::vector<Rat>{Rat(1), Rat(-1)});

  // Non-affine arguments stay opaque even on a sign-definite interval.
  CHECK(!Expr::parse("max(x, x^2)").polynomial_on(Rat(2), Rat(3)).has_value());
  // Plain polynomials pass through unchanged.
  auto sq = Expr::parse("x^2").polynomial_on(Rat(-1), Rat(1));
  REQUIRE(sq.has_value());
  CHECK(*sq == std::vector<Rat>{Rat(0), Rat(0), Rat(1)});
}

TEST_CASE("expression decimal evaluation") {
  Expr e = Expr::parse("x^2 * sin(1/x^2)");
  CHECK(!e.exact());
  // At x = 1/10: x^2 sin(100) = 0.01 * (-0.50636564...)
  Rat v = e.eval({Rat(1, 10)}, 20);
  Rat expect = *parse_rat("-50636564110975879366/10000000000000000000000");
  CHECK(abs_rat(v - expect) < Rat(1, pow10(15)));

  Expr sq = Expr::parse("min(4, 1/sqrt(x))");
  Rat w = sq.eval({Rat(1, 4)}, 20);
  CHECK(abs_rat(w - Rat(2)) < Rat(1, pow10(15)));
}

TEST_CASE("rng determinism") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(42);
  Rng d = c.fork(7);
  Rng e = c.fork(7);
  CHECK(d.next() == e.next());
}
