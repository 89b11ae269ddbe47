#include <doctest.h>

#include <vector>

#include "prering/errors.hpp"
#include "prering/measure.hpp"
#include "prering/simple_function.hpp"
#include "prering/vector_measure.hpp"
#include "test_util.hpp"

using namespace prering;
using namespace prering::testutil;

namespace {
Cell ho(int lo, int hi) { return Cell::half_open({Rat(lo)}, {Rat(hi)}); }
}  // namespace

TEST_CASE("normalize resolves overlapping terms") {
  // c_[0,2) + c_[1,3) has values 1, 2, 1 on [0,1), [1,2), [2,3).
  SimpleFunction h = SimpleFunction::from_terms(
      1, 1, {{{Rat(1)}, ho(0, 2)}, {{Rat(1)}, ho(1, 3)}});
  REQUIRE(h.terms().size() == 3);
  CHECK(h.terms()[0].cell == ho(0, 1));
  CHECK(h.terms()[0].y == Vec{Rat(1)});
  CHECK(h.terms()[1].cell == ho(1, 2));
  CHECK(h.terms()[1].y == Vec{Rat(2)});
  CHECK(h.terms()[2].cell == ho(2, 3));
  CHECK(h.terms()[2].y == Vec{Rat(1)});
  CHECK(h.eval1(Rat(3, 2)) == Vec{Rat(2)});
  CHECK(h.eval1(Rat(5)) == Vec{Rat(0)});

  SimpleFunction zero = SimpleFunction::from_terms(1, 1, {});
  CHECK(zero.is_zero());
  SimpleFunction on_empty = SimpleFunction::from_terms(
      1, 1, {{{Rat(7)}, Cell::empty_cell(1)}});
  CHECK(on_empty.is_zero());
  // Cancelling overlap drops the shared piece.
  SimpleFunction cancel = SimpleFunction::from_terms(
      1, 1, {{{Rat(1)}, ho(0, 2)}, {{Rat(-1)}, ho(1, 3)}});
  CHECK(cancel.eval1(Rat(3, 2)) == Vec{Rat(0)});
  CHECK(cancel.eval1(Rat(1, 2)) == Vec{Rat(1)});
}

TEST_CASE("seminorm frozen values") {
  Measure len = Measure::length();
  SimpleFunction h = SimpleFunction::from_terms(
      1, 1, {{{Rat(2)}, ho(0, 1)}, {{Rat(5)}, ho(1, 2)}});
  Radical n = seminorm(h, len);
  CHECK(n.is_rational());
  CHECK(n.rational_value() == Rat(7));
  CHECK(seminorm(SimpleFunction(1, 1), len).is_zero());
  // Euclidean norm of (3,4) is 5.
  SimpleFunction v2 = SimpleFunction::from_terms(
      1, 2, {{{Rat(3), Rat(4)}, ho(0, 1)}});
  Radical n2 = seminorm(v2, len);
  CHECK(n2.is_rational());
  CHECK(n2.rational_value() == Rat(5));
}

TEST_CASE("elementary integral frozen values") {
  Measure len = Measure::length();
  SimpleFunction h = SimpleFunction::from_terms(
      1, 1, {{{Rat(2)}, ho(0, 1)}, {{Rat(5)}, ho(1, 2)}});
  CHECK(integral(h, len) == Vec{Rat(7)});
  // Same function on halved cells: representation independence.
  SimpleFunction halved = SimpleFunction::from_terms(
      1, 1,
      {{{Rat(2)}, Cell::half_open(Rat(0), Rat(1, 2))},
       {{Rat(2)}, Cell::half_open(Rat(1, 2), Rat(1))},
       {{Rat(5)}, Cell::half_open(Rat(1), Rat(3, 2))},
       {{Rat(5)}, Cell::half_open(Rat(3, 2), Rat(2))}});
  CHECK(integral(halved, len) == Vec{Rat(7)});
  // Constant-sign vector case: integral (2,-2), seminorm 2 sqrt(2), equal.
  SimpleFunction w = SimpleFunction::from_terms(
      1, 2, {{{Rat(1), Rat(-1)}, ho(0, 2)}});
  Vec iw = integral(w, len);
  CHECK(iw == Vec{Rat(2), Rat(-2)});
  Radical norm_iw = vec_norm(iw);
  Radical sn = seminorm(w, len);
  CHECK(Radical::compare(norm_iw, sn) == 0);
  check_integral_norm_bound(w, len);
}

TEST_CASE("trilinear integral frozen values") {
  Measure len = Measure::length();
  BilinearOp sm = BilinearOp::from_name("scalar-multiply");
  SimpleFunction h = SimpleFunction::from_terms(
      1, 1, {{{Rat(2)}, ho(0, 1)}, {{Rat(5)}, ho(1, 2)}});
  VectorMeasure mu = VectorMeasure::constant({Rat(1), Rat(2)}, len);
  CHECK(trilinear_integral(sm, h, mu) == Vec{Rat(7), Rat(14)});
  CHECK(trilinear_integral(sm, SimpleFunction(1, 1), mu) ==
        Vec{Rat(0), Rat(0)});
  BilinearOp dot = BilinearOp::from_name("dot-product");
  SimpleFunction e1 = SimpleFunction::from_terms(
      1, 2, {{{Rat(1), Rat(0)}, ho(0, 1)}});
  VectorMeasure mu34 = VectorMeasure::constant({Rat(3), Rat(4)}, len);
  CHECK(trilinear_integral(dot, e1, mu34) == Vec{Rat(3)});
  check_trilinear_norm_bound(dot, e1, mu34);
  // Descriptor-level examples: scalar-multiply with density (2) halves
  // into (1)-like scaling; dot with constant (1,1) against density (1,3).
  SimpleFunction fx_const = SimpleFunction::from_terms(
      1, 2, {{{Rat(1), Rat(1)}, ho(0, 1)}});
  VectorMeasure mu13 = VectorMeasure::constant({Rat(1), Rat(3)}, len);
  CHECK(trilinear_integral(dot, fx_const, mu13) == Vec{Rat(4)});
}

TEST_CASE("bilinear op shapes and probe identities") {
  Rng rng(4242);
  std::vector<BilinearOp> ops = {BilinearOp::from_name("scalar-multiply"),
                                 BilinearOp::from_name("componentwise"),
                                 BilinearOp::from_name("dot-product")};
  for (const BilinearOp& u : ops) {
    for (int iter = 0; iter < 50; ++iter) {
      int zdim = 1 + int(rng.below(3));
      int ydim = u.kind() == BilinearOp::Kind::kScalarMultiply ? 1 : zdim;
      Vec y1 = random_vec(rng, ydim), y2 = random_vec(rng, ydim);
      Vec z1 = random_vec(rng, zdim), z2 = random_vec(rng, zdim);
      Rat lam = rng.rat(5, 4);
      CHECK(u.apply(vec_add(y1, y2), z1) ==
            vec_add(u.apply(y1, z1), u.apply(y2, z1)));
      CHECK(u.apply(y1, vec_add(z1, z2)) ==
            vec_add(u.apply(y1, z1), u.apply(y1, z2)));
      CHECK(u.apply(vec_scale(lam, y1), z1) == vec_scale(lam, u.apply(y1, z1)));
      CHECK(u.apply(y1, vec_scale(lam, z1)) == vec_scale(lam, u.apply(y1, z1)));
      // |u(y,z)|^2 <= |y|^2 |z|^2 exactly.
      Rat uu = vec_norm_sq(u.apply(y1, z1));
      CHECK(uu <= vec_norm_sq(y1) * vec_norm_sq(z1));
    }
  }
  CHECK_THROWS_AS(BilinearOp::from_name("outer"), Error);
  CHECK_THROWS_AS(
      BilinearOp::from_name("dot-product").apply({Rat(1)}, {Rat(1), Rat(2)}),
      Error);
}

TEST_CASE("vector measure evaluation, additivity, norm") {
  Measure len = Measure::length();
  VectorMeasure mu = VectorMeasure::piecewise(
      {{{Rat(1)}, ho(0, 1)}, {{Rat(-1)}, ho(1, 2)}}, len);
  CHECK(mu(ho(0, 2)) == Vec{Rat(0)});
  CHECK(mu(ho(0, 1)) == Vec{Rat(1)});
  CHECK(mu(Cell::half_open(Rat(1, 2), Rat(3, 2))) == Vec{Rat(0)});
  CHECK(mu(ho(5, 6)) == Vec{Rat(0)});
  CHECK(mu.norm_sq() == Rat(1));

  VectorMeasure m12 = VectorMeasure::constant({Rat(1), Rat(2)}, len);
  CHECK(m12.norm_sq() == Rat(5));
  Radical m12n = m12.norm();
  CHECK(Radical::compare(m12n, Radical::sqrt_term(Rat(5))) == 0);

  // Variation: constant density has none; the split density recovers 2.
  Radical v0 = variation(mu, ho(0, 2), 0);
  CHECK(v0.is_zero());
  Radical v1 = variation(mu, ho(0, 2), 1);
  CHECK(v1.is_rational());
  CHECK(v1.rational_value() == Rat(2));
  Radical vc = variation(m12, ho(0, 1), 3);
  CHECK(Radical::compare(vc, Radical::sqrt_term(Rat(5))) == 0);
  VectorMeasure zero = VectorMeasure::constant({Rat(0)}, len);
  CHECK(variation(zero, ho(0, 1), 2).is_zero());

  // Completion on a simple set is additive.
  VectorMeasure e1 = VectorMeasure::constant({Rat(1), Rat(0)}, len);
  Vec comp = completion_on_simple(
      e1, SimpleSet::from_disjoint(1, {ho(0, 1), ho(2, 3)}));
  CHECK(comp == Vec{Rat(2), Rat(0)});
  CHECK(completion_on_simple(e1, SimpleSet(1)) == Vec{Rat(0), Rat(0)});

  CHECK_THROWS_AS(VectorMeasure::piecewise(
                      {{{Rat(1)}, ho(0, 2)}, {{Rat(2)}, ho(1, 3)}}, len),
                  Error);
}

TEST_CASE("vector measure additivity over refinements") {
  Rng rng(1123);
  Measure len = Measure::length();
  for (int iter = 0; iter < 50; ++iter) {
    VectorMeasure mu = VectorMeasure::piecewise(
        {{random_vec(rng, 2), ho(-2, 0)}, {random_vec(rng, 2), ho(0, 2)}},
        len);
    Cell a = random_interval(rng, 4, 4);
    if (a.empty()) continue;
    // Split a at random points; the pieces must sum to mu(a).
    std::vector<Cell> pieces = split_interval(rng, a.bound(0), 3);
    if (pieces.empty()) continue;
    Vec total = vec_zero(2);
    for (const Cell& p : pieces) total = vec_add(total, mu(p));
    CHECK(total == mu(a));
  }
}

TEST_CASE("representation independence across re-refinements") {
  Rng rng(20260818);
  Measure len = Measure::length();
  BilinearOp sm = BilinearOp::from_name("scalar-multiply");
  for (int iter = 0; iter < 120; ++iter) {
    int vdim = 1 + int(rng.below(3));
    SimpleFunction h = random_simple_function(rng, 1, vdim);
    VectorMeasure mu = VectorMeasure::constant(random_vec(rng, 2), len);
    SimpleFunction hs = SimpleFunction::from_terms(1, 1, [&] {
      std::vector<SimpleFunction::Term> ts;
      for (const auto& t : h.terms()) ts.push_back({{t.y[0]}, t.cell});
      return ts;
    }());
    Vec i0 = integral(h, len);
    Radical n0 = seminorm(h, len);
    Vec t0 = trilinear_integral(sm, hs, mu);
    for (int round = 0; round < 3; ++round) {
      SimpleFunction h2 = re_refine(rng, h);
      CHECK(integral(h2, len) == i0);
      CHECK(seminorm(h2, len) == n0);
      SimpleFunction hs2 = re_refine(rng, hs);
      CHECK(trilinear_integral(sm, hs2, mu) == t0);
    }
  }
}

TEST_CASE("norm bound certificates on random instances") {
  Rng rng(555);
  Measure len = Measure::length();
  std::vector<BilinearOp> ops = {BilinearOp::from_name("scalar-multiply"),
                                 BilinearOp::from_name("componentwise"),
                                 BilinearOp::from_name("dot-product")};
  for (int iter = 0; iter < 100; ++iter) {
    int vdim = 1 + int(rng.below(3));
    SimpleFunction h = random_simple_function(rng, 1, vdim);
    check_integral_norm_bound(h, len);
    const BilinearOp& u = ops[rng.below(3)];
    int ydim = u.kind() == BilinearOp::Kind::kScalarMultiply ? 1 : 2;
    SimpleFunction hu = random_simple_function(rng, 1, ydim);
    VectorMeasure mu =
        rng.coin() ? VectorMeasure::constant(random_vec(rng, 2), len)
                   : VectorMeasure::piecewise({{random_vec(rng, 2), ho(-3, 0)},
                                               {random_vec(rng, 2), ho(0, 3)}},
                                              len);
    check_trilinear_norm_bound(u, hu, mu);
  }
}

TEST_CASE("linearity, positivity, monotonicity, product closure") {
  Rng rng(8080);
  Measure len = Measure::length();
  for (int iter = 0; iter < 60; ++iter) {
    SimpleFunction f = random_simple_function(rng, 1, 2);
    SimpleFunction g = random_simple_function(rng, 1, 2);
    Rat lam = rng.rat(5, 4);
    CHECK(integral(f.plus(g), len) ==
          vec_add(integral(f, len), integral(g, len)));
    CHECK(integral(f.scaled(lam), len) == vec_scale(lam, integral(f, len)));
    // Seminorm homogeneity: |lam| factors out exactly.
    Radical sf = seminorm(f, len);
    Radical sflam = seminorm(f.scaled(lam), len);
    CHECK(sflam == sf.scaled(abs_rat(lam)));
    // Triangle inequality for the seminorm.
    int cmp = Radical::compare(seminorm(f.plus(g), len), sf + seminorm(g, len));
    CHECK(cmp <= 0);

    // Positivity and monotonicity for scalar functions.
    SimpleFunction p = random_simple_function(rng, 1, 1);
    std::vector<SimpleFunction::Term> abs_terms;
    for (const auto& t : p.terms())
      abs_terms.push_back({{abs_rat(t.y[0])}, t.cell});
    SimpleFunction pa = SimpleFunction::from_terms(1, 1, abs_terms);
    CHECK(integral(pa, len)[0] >= 0);
    // pa >= p pointwise, so the integrals are ordered.
    CHECK(integral(pa, len)[0] >= integral(p, len)[0]);

    // Product closure: (g0 * f)(x) = g0(x) f(x) at sampled points.
    SimpleFunction g0 = random_simple_function(rng, 1, 1);
    SimpleFunction prod = pointwise_product(g0, f);
    for (int probe = 0; probe < 20; ++probe) {
      Rat x = rng.rat_in(Rat(-10), Rat(10));
      CHECK(prod.eval1(x) == vec_scale(g0.eval1(x)[0], f.eval1(x)));
    }
    // Lattice operations agree pointwise.
    SimpleFunction q = random_simple_function(rng, 1, 1);
    SimpleFunction sup = pointwise_sup(p, q);
    SimpleFunction inf = pointwise_inf(p, q);
    for (int probe = 0; probe < 20; ++probe) {
      Rat x = rng.rat_in(Rat(-10), Rat(10));
      CHECK(sup.eval1(x)[0] == std::max(p.eval1(x)[0], q.eval1(x)[0]));
      CHECK(inf.eval1(x)[0] == std::min(p.eval1(x)[0], q.eval1(x)[0]));
    }
  }
}

TEST_CASE("translation invariance of the elementary integral") {
  Rng rng(99);
  Measure len = Measure::length();
  for (int iter = 0; iter < 40; ++iter) {
    SimpleFunction h = random_simple_function(rng, 1, 2);
    Rat shift = rng.rat(10, 6);
    std::vector<SimpleFunction::Term> moved;
    for (const auto& t : h.terms()) {
      Interval b = t.cell.bound(0);
      b.lo.value += shift;
      b.hi.value += shift;
      moved.push_back({t.y, Cell::make({b})});
    }
    SimpleFunction hT = SimpleFunction::from_terms(1, 2, moved);
    CHECK(integral(hT, len) == integral(h, len));
    CHECK(seminorm(hT, len) == seminorm(h, len));
  }
}
