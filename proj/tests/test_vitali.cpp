#include <doctest.h>

#include <vector>

#include "prering/decimal.hpp"
#include "prering/errors.hpp"
#include "prering/rng.hpp"
#include "prering/vitali.hpp"
#include "test_util.hpp"

using namespace prering;

namespace {

const Cell kUnit = Cell::closed_interval(Rat(0), Rat(1));

std::vector<Rat> equispaced64() {
  std::vector<Rat> pts;
  for (int k = 0; k < 64; ++k) pts.push_back(Rat(k, 64));
  return pts;
}

FunctionProbe probe_of(const std::string& src) {
  FunctionProbe p;
  p.value = Expr::parse(src);
  return p;
}

// Step schedule 1/((k + 1/2) pi), with pi rounded to 9 digits; at these
// widths x sin(1/x) evaluates to roughly +-1 times the width.
std::vector<Rat> reciprocal_pi_schedule(int from, int to) {
  std::vector<Rat> sched;
  for (int k = from; k <= to; ++k)
    sched.push_back(Rat(Int(2) * pow10(8), Int(2 * k + 1) * Int("314159265")));
  return sched;
}

IntegrandDescriptor step_pm_half() {
  return IntegrandDescriptor::simple(SimpleFunction::from_terms(
      1, 1,
      {{Vec{Rat(-1)}, Cell::half_open(Rat(0), Rat(1, 2))},
       {Vec{Rat(1)}, Cell::half_open(Rat(1, 2), Rat(1))}}));
}

}  // namespace

TEST_CASE("expand grows by twice the length on each side") {
  Cell I = Cell::closed_interval(Rat(2, 5), Rat(1, 2));
  CHECK(expand(I, kUnit) == Cell::closed_interval(Rat(1, 5), Rat(7, 10)));
  CHECK(expand(Cell(), kUnit).empty());
  CHECK(expand(kUnit, kUnit) == kUnit);

  Rng rng(0x5eed);
  for (int i = 0; i < 200; ++i) {
    Rat a = rng.rat(1, 6), b = rng.rat(1, 6);
    if (b < a) std::swap(a, b);
    a = abs_rat(a);
    b = a + abs_rat(b - a);
    if (b > 1) continue;
    Cell c = Cell::closed_interval(a, b);
    Cell s = expand(c, kUnit);
    CHECK(s.bound(0).lo.value <= a);
    CHECK(s.bound(0).hi.value >= b);
    CHECK(s.volume() <= 5 * c.volume());
    CHECK(s.bound(0).lo.value >= Rat(0));
    CHECK(s.bound(0).hi.value <= Rat(1));
  }
}

TEST_CASE("dyadic rule returns the coarsest containing cell under scale") {
  auto fam = VitaliFamily::dyadic();
  Cell c = fam.rule(Rat(1, 3), Rat(1, 4));
  CHECK(c == Cell::closed_interval(Rat(1, 4), Rat(3, 8)));
  // the right ambient endpoint clamps into the last cell
  CHECK(fam.rule(Rat(1), Rat(1, 4)) ==
        Cell::closed_interval(Rat(3, 4), Rat(1)));
  for (int k = 1; k < 16; ++k) {
    Rat x(k, 16);
    Cell cell = fam.rule(x, Rat(1, 10));
    CHECK(cell.contains1(x));
    CHECK(cell.volume() < Rat(1, 10));
    CHECK(cell.volume() > 0);
  }
  CHECK_THROWS_AS(fam.rule(Rat(1, 2), Rat(0)), Error);
}

TEST_CASE("two separated points select to a finite cover of two balls") {
  VitaliFamily fam;
  fam.ambient = kUnit;
  fam.rule = [](const Rat& x, const Rat& scale) {
    Rat r = std::min(scale / 3, Rat(1, 16));
    return Cell::closed_interval(x - r, x + r);
  };
  std::vector<Rat> pts = {Rat(1, 4), Rat(3, 4)};
  SparseSelection sel = vitali_select(fam, pts, 8);
  REQUIRE(sel.cells.size() == 2);
  CHECK(sel.status == SelectionStatus::kFiniteCover);
  CHECK(sel.cells[0] == Cell::closed_interval(Rat(3, 16), Rat(5, 16)));
  CHECK(sel.cells[1] == Cell::closed_interval(Rat(11, 16), Rat(13, 16)));
  verify_selection(sel, pts);
  CHECK(interlaced_check(sel, pts, 0));
  CHECK(interlaced_check(sel, pts, 2));
}

TEST_CASE("dyadic demo trace is frozen") {
  auto fam = VitaliFamily::dyadic();
  std::vector<Rat> pts = equispaced64();
  SparseSelection sel = vitali_select(fam, pts, 32);

  REQUIRE(sel.cells.size() == 9);
  CHECK(sel.status == SelectionStatus::kFiniteCover);
  CHECK(sel.cells[0] == Cell::closed_interval(Rat(0), Rat(1, 2)));
  CHECK(sel.cells[1] == Cell::closed_interval(Rat(3, 4), Rat(1)));
  CHECK(sel.cells[2] == Cell::closed_interval(Rat(9, 16), Rat(5, 8)));
  CHECK(sel.cells[3] == Cell::closed_interval(Rat(21, 32), Rat(11, 16)));
  CHECK(sel.cells[4] == Cell::closed_interval(Rat(33, 64), Rat(17, 32)));
  CHECK(sel.cells[5] == Cell::closed_interval(Rat(45, 64), Rat(23, 32)));
  CHECK(sel.cells[6] == Cell::closed_interval(Rat(35, 64), Rat(71, 128)));
  CHECK(sel.cells[7] == Cell::closed_interval(Rat(41, 64), Rat(83, 128)));
  CHECK(sel.cells[8] == Cell::closed_interval(Rat(47, 64), Rat(95, 128)));
  CHECK(sel.sup_values[0] == Rat(1, 2));
  CHECK(sel.sup_values[1] == Rat(1, 4));
  CHECK(sel.sup_values[2] == Rat(1, 16));
  CHECK(sel.sup_values[8] == Rat(1, 128));

  verify_selection(sel, pts);
  for (int n = 0; n <= 9; ++n) CHECK(interlaced_check(sel, pts, n));
  CHECK_THROWS_AS(interlaced_check(sel, pts, 10), Error);

  // near-sup inequality holds strictly at every step
  for (std::size_t j = 0; j < sel.cells.size(); ++j)
    CHECK(sel.sup_values[j] < 2 * sel.cells[j].volume());
  // total selected length stays within the ambient
  Rat total(0);
  for (const Cell& c : sel.cells) total += c.volume();
  CHECK(total <= Rat(1));
}

TEST_CASE("budget one stops after the largest cell") {
  auto fam = VitaliFamily::dyadic();
  std::vector<Rat> pts = equispaced64();
  SparseSelection sel = vitali_select(fam, pts, 1);
  REQUIRE(sel.cells.size() == 1);
  CHECK(sel.status == SelectionStatus::kBudgetExhausted);
  CHECK(sel.cells[0] == Cell::closed_interval(Rat(0), Rat(1, 2)));
  verify_selection(sel, pts);
  // the expansion of the single cell still reaches every sample
  CHECK(interlaced_check(sel, pts, 0));
  // but the cell alone does not
  CHECK_FALSE(interlaced_check(sel, pts, 1));
}

TEST_CASE("tampered selection logs fail the replay") {
  auto fam = VitaliFamily::dyadic();
  std::vector<Rat> pts = equispaced64();
  SparseSelection sel = vitali_select(fam, pts, 32);

  SparseSelection dropped = sel;
  dropped.cells.erase(dropped.cells.begin());
  dropped.sup_values.erase(dropped.sup_values.begin());
  CHECK_THROWS_AS(verify_selection(dropped, pts), Error);
  CHECK_FALSE(
      interlaced_check(dropped, pts, int(dropped.cells.size())));

  SparseSelection lying = sel;
  lying.sup_values[0] = 2 * lying.cells[0].volume();
  CHECK_THROWS_AS(verify_selection(lying, pts), Error);

  SparseSelection overlapped = sel;
  overlapped.cells.push_back(overlapped.cells[0]);
  overlapped.sup_values.push_back(overlapped.sup_values[0]);
  try {
    verify_selection(overlapped, pts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisjointnessViolation);
  }
}

TEST_CASE("invalid rules report a rule violation") {
  VitaliFamily fam;
  fam.ambient = kUnit;
  std::vector<Rat> pts = {Rat(1, 2)};
  // cell as long as the scale itself is not admissible
  fam.rule = [](const Rat& x, const Rat& scale) {
    Rat hi = std::min(x + scale, Rat(1));
    return Cell::closed_interval(x, hi);
  };
  CHECK_THROWS_AS(vitali_select(fam, pts, 4), Error);
  // cell missing the query point
  fam.rule = [](const Rat&, const Rat& scale) {
    return Cell::closed_interval(Rat(0), scale / 2);
  };
  try {
    vitali_select(fam, {Rat(3, 4)}, 4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RuleViolation);
  }
  // sample outside the ambient is an input error
  auto dy = VitaliFamily::dyadic();
  CHECK_THROWS_AS(vitali_select(dy, {Rat(2)}, 4), Error);
  CHECK_THROWS_AS(vitali_select(dy, {}, 4), Error);
  CHECK_THROWS_AS(vitali_select(dy, {Rat(1, 2)}, 0), Error);
}

TEST_CASE("dini quartets for kinked and linear probes are exact") {
  std::vector<Rat> sched = {Rat(1, 2), Rat(1, 4), Rat(1, 8)};
  DiniQuartet q = dini(probe_of("abs(x)"), Rat(0), sched);
  CHECK(q.right_upper == Rat(1));
  CHECK(q.right_lower == Rat(1));
  CHECK(q.left_upper == Rat(-1));
  CHECK(q.left_lower == Rat(-1));

  DiniQuartet lin = dini(probe_of("3*x+1"), Rat(2, 7), sched);
  CHECK(lin.right_upper == Rat(3));
  CHECK(lin.right_lower == Rat(3));
  CHECK(lin.left_upper == Rat(3));
  CHECK(lin.left_lower == Rat(3));

  CHECK_THROWS_AS(dini(probe_of("x"), Rat(0), {}), Error);
  CHECK_THROWS_AS(dini(probe_of("x"), Rat(0), {Rat(0)}), Error);
  CHECK_THROWS_AS(dini(probe_of("x"), Rat(0), {Rat(1, 4), Rat(1, 2)}), Error);
}

TEST_CASE("dini estimates of the oscillation straddle plus minus one") {
  FunctionProbe osc;
  osc.value = Expr::parse("x*sin(1/x)");
  osc.special_values.emplace_back(Rat(0), Rat(0));
  osc.digits = 12;
  DiniQuartet q = dini(osc, Rat(0), reciprocal_pi_schedule(1, 6));
  CHECK(q.right_upper > Rat(99, 100));
  CHECK(q.right_lower < Rat(-99, 100));
  CHECK(q.left_upper > Rat(99, 100));
  CHECK(q.left_lower < Rat(-99, 100));
  // ordering holds at every schedule prefix
  Rat rmax = q.right_quotients[0], rmin = q.right_quotients[0];
  for (const Rat& v : q.right_quotients) {
    rmax = std::max(rmax, v);
    rmin = std::min(rmin, v);
    CHECK(rmin <= rmax);
  }
}

TEST_CASE("difference quotients are additive over probe sums") {
  std::vector<Rat> sched = {Rat(1, 4), Rat(1, 8), Rat(1, 16)};
  Rat p(1, 3);
  DiniQuartet a = dini(probe_of("x"), p, sched);
  DiniQuartet b = dini(probe_of("x^2"), p, sched);
  DiniQuartet c = dini(probe_of("x^3"), p, sched);
  DiniQuartet sum = dini(probe_of("x + x^2 + x^3"), p, sched);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    CHECK(sum.right_quotients[i] == a.right_quotients[i] +
                                        b.right_quotients[i] +
                                        c.right_quotients[i]);
    CHECK(sum.left_quotients[i] ==
          a.left_quotients[i] + b.left_quotients[i] + c.left_quotients[i]);
  }
}

TEST_CASE("quartet spread shrinks with deeper schedules off the kink") {
  // windowed schedules: depth d uses steps 2^-d, 2^-d-1, 2^-d-2
  auto window = [](int d) {
    return std::vector<Rat>{Rat(Int(1), pow2(unsigned(d))),
                            Rat(Int(1), pow2(unsigned(d + 1))),
                            Rat(Int(1), pow2(unsigned(d + 2)))};
  };
  auto spread_count = [&](const FunctionProbe& f, int depth, const Rat& tol) {
    int n = 0;
    for (int k = 1; k < 16; ++k) {
      DiniQuartet q = dini(f, Rat(k, 16), window(depth));
      Rat hi = std::max(std::max(q.right_upper, q.left_upper),
                        std::max(q.right_lower, q.left_lower));
      Rat lo = std::min(std::min(q.right_upper, q.left_upper),
                        std::min(q.right_lower, q.left_lower));
      if (hi - lo > tol) ++n;
    }
    return n;
  };
  FunctionProbe smooth = probe_of("x^2");
  FunctionProbe kink = probe_of("abs(x - 1/2)");
  Rat tol(1, 10);
  CHECK(spread_count(smooth, 6, tol) <= spread_count(smooth, 3, tol));
  CHECK(spread_count(smooth, 8, tol) == 0);
  CHECK(spread_count(kink, 6, tol) <= spread_count(kink, 3, tol));
  CHECK(spread_count(kink, 8, tol) == 1);  // only the kink itself stays
}

TEST_CASE("newton check is exact for the kinked primitive") {
  FunctionProbe vee = probe_of("abs(x - 1/2)");
  vee.lipschitz = Rat(1);
  vee.derivative = step_pm_half();
  vee.derivative_null_grid = {Rat(1, 2)};
  NewtonReport r = newton_check(vee, Rat(0), Rat(1), Rat(1, 1000000000));
  CHECK(r.increment == Rat(0));
  CHECK(r.integral.value[0] == Rat(0));
  CHECK(r.integral.error_bound == Rat(0));
  CHECK(r.residual == Rat(0));
  CHECK(r.ok);
}

TEST_CASE("newton check certifies the square within tolerance") {
  FunctionProbe sq = probe_of("x^2");
  sq.lipschitz = Rat(2);
  sq.derivative = IntegrandDescriptor::monotone(
      Expr::parse("2*x"), Cell::half_open(Rat(0), Rat(1)), true);
  NewtonReport r = newton_check(sq, Rat(0), Rat(1), Rat(1, 1000000));
  CHECK(r.increment == Rat(1));
  CHECK(abs_rat(r.integral.value[0] - Rat(1)) <= r.integral.error_bound);
  CHECK(r.residual <= r.allowance);
  CHECK(r.ok);

  FunctionProbe flat = probe_of("5");
  flat.lipschitz = Rat(0);
  flat.derivative = IntegrandDescriptor::simple(SimpleFunction(1, 1));
  NewtonReport rf = newton_check(flat, Rat(0), Rat(1), Rat(0));
  CHECK(rf.increment == Rat(0));
  CHECK(rf.residual == Rat(0));
  CHECK(rf.ok);
}

TEST_CASE("newton check rejects an understated lipschitz constant") {
  FunctionProbe sq = probe_of("x^2");
  sq.lipschitz = Rat(1, 2);  // true constant on [0,1] is 2
  sq.derivative = IntegrandDescriptor::monotone(
      Expr::parse("2*x"), Cell::half_open(Rat(0), Rat(1)), true);
  try {
    newton_check(sq, Rat(0), Rat(1), Rat(1, 1000));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LipschitzViolation);
  }

  FunctionProbe bare = probe_of("x");
  bare.derivative = IntegrandDescriptor::simple(SimpleFunction(1, 1));
  CHECK_THROWS_AS(newton_check(bare, Rat(0), Rat(1), Rat(1)), Error);
  FunctionProbe nod = probe_of("x");
  nod.lipschitz = Rat(1);
  CHECK_THROWS_AS(newton_check(nod, Rat(0), Rat(1), Rat(1)), Error);
  CHECK_THROWS_AS(newton_check(sq, Rat(1), Rat(0), Rat(1)), Error);
}

TEST_CASE("indefinite integral restricts exactly and signs by direction") {
  IntegrandDescriptor step = step_pm_half();
  IntegralResult a = indefinite_integral(step, Rat(0), Rat(3, 4), Rat(1));
  CHECK(a.value[0] == Rat(-1, 4));
  CHECK(a.error_bound == Rat(0));
  IntegralResult b = indefinite_integral(step, Rat(3, 4), Rat(1, 8), Rat(1));
  CHECK(b.value[0] == Rat(1, 8));
  IntegralResult z = indefinite_integral(step, Rat(1, 2), Rat(1, 2), Rat(1));
  CHECK(z.value[0] == Rat(0));

  auto lin = IntegrandDescriptor::monotone(
      Expr::parse("2*x"), Cell::half_open(Rat(0), Rat(1)), true);
  IntegralResult q =
      indefinite_integral(lin, Rat(0), Rat(1, 2), Rat(1, 1000000));
  CHECK(abs_rat(q.value[0] - Rat(1, 4)) <= q.error_bound);
  CHECK(q.error_bound <= Rat(1, 1000000));
}

TEST_CASE("declared lipschitz constants prove a modulus") {
  FunctionProbe f = probe_of("3*x+1");
  f.lipschitz = Rat(3);
  auto systems = [](int r) {
    IntervalSystem sys;
    sys.count = 4;
    sys.sorted = true;
    sys.cell = [r](std::int64_t i) {
      Rat lo = Rat(i, 4) + Rat(1, 100);
      return Cell::closed_interval(lo, lo + Rat(Int(1), pow2(unsigned(r + 5))));
    };
    return sys;
  };
  AbsContinuityReport rep =
      abs_continuity_probe(f, Rat(1), systems, 3);
  CHECK(rep.outcome == AbsContinuityOutcome::kProvenModulus);
  CHECK(rep.delta == Rat(1, 3));
  CHECK(rep.rounds_run == 3);

  FunctionProbe flat = probe_of("7");
  flat.lipschitz = Rat(0);
  AbsContinuityReport rc = abs_continuity_probe(flat, Rat(1), systems, 2);
  CHECK(rc.outcome == AbsContinuityOutcome::kProvenModulus);
  CHECK(rc.delta == Rat(1));

  // without a declared constant the probe reports the scale it survived
  FunctionProbe und = probe_of("3*x+1");
  AbsContinuityReport ru = abs_continuity_probe(und, Rat(1), systems, 3);
  CHECK(ru.outcome == AbsContinuityOutcome::kEstimatedModulus);
  CHECK(ru.delta == Rat(4, 32));  // four cells of length 2^-5
}

TEST_CASE("understated lipschitz constants are caught by the variation") {
  FunctionProbe f = probe_of("10*x");
  f.lipschitz = Rat(1);
  auto systems = [](int) {
    IntervalSystem sys;
    sys.count = 2;
    sys.sorted = true;
    sys.cell = [](std::int64_t i) {
      return Cell::closed_interval(Rat(i, 2), Rat(i, 2) + Rat(1, 4));
    };
    return sys;
  };
  try {
    abs_continuity_probe(f, Rat(1), systems, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LipschitzViolation);
  }
}

TEST_CASE("oscillation witness violates absolute continuity at eps one") {
  AbsContinuityReport rep = abs_continuity_probe(
      oscillation_probe(11), Rat(1), oscillation_witness(1200, 4800), 1);
  CHECK(rep.outcome == AbsContinuityOutcome::kViolation);
  CHECK(rep.witness_round == 0);
  CHECK(rep.witness_total_length < Rat(1, 100));
  CHECK(rep.witness_variation > Rat(1));
  // frozen certificate values
  CHECK(format_decimal(rep.witness_total_length, 8) == "0.00900618");
  CHECK(format_decimal(rep.witness_variation, 6) == "1.024812");
}

TEST_CASE("bad interval systems report generator errors") {
  FunctionProbe f = probe_of("x");
  auto overlapping = [](int) {
    IntervalSystem sys;
    sys.count = 2;
    sys.sorted = true;
    sys.cell = [](std::int64_t i) {
      return Cell::closed_interval(Rat(i, 4), Rat(i, 4) + Rat(1, 2));
    };
    return sys;
  };
  try {
    abs_continuity_probe(f, Rat(1), overlapping, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GeneratorInvalid);
  }

  auto growing = [](int r) {
    IntervalSystem sys;
    sys.count = 1;
    sys.sorted = true;
    sys.cell = [r](std::int64_t) {
      return Cell::closed_interval(Rat(0), Rat(r + 1, 10));
    };
    return sys;
  };
  try {
    abs_continuity_probe(f, Rat(1), growing, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GeneratorInvalid);
  }

  // unsorted systems are materialized and re-checked
  auto unsorted = [](int) {
    IntervalSystem sys;
    sys.count = 2;
    sys.sorted = false;
    sys.cell = [](std::int64_t i) {
      return i == 0 ? Cell::closed_interval(Rat(1, 2), Rat(3, 4))
                    : Cell::closed_interval(Rat(0), Rat(1, 4));
    };
    return sys;
  };
  AbsContinuityReport ok = abs_continuity_probe(f, Rat(10), unsorted, 1);
  CHECK(ok.outcome == AbsContinuityOutcome::kEstimatedModulus);
}

TEST_CASE("oscillation witness cells match the extremum spacing") {
  auto gen = oscillation_witness(8, 8);
  IntervalSystem sys = gen(0);
  REQUIRE(sys.count == 8);
  FunctionProbe F = oscillation_probe(14);
  Rat pi = pi_dec(20);
  Rat prev_hi(-1);
  for (std::int64_t i = 0; i < sys.count; ++i) {
    Cell c = sys.cell(i);
    CHECK(c.bound(0).lo.value > prev_hi);
    prev_hi = c.bound(0).hi.value;
    std::int64_t j = 8 + sys.count - 1 - i;
    Rat expect = Rat(1) / ((Rat(2 * j - 1) / 2) * pi) +
                 Rat(1) / ((Rat(2 * j + 1) / 2) * pi);
    Rat got = abs_rat(F.eval(c.bound(0).hi.value) -
                      F.eval(c.bound(0).lo.value));
    CHECK(abs_rat(got - expect) < expect * Rat(3, 100));
  }
}

TEST_CASE("lebesgue point averages see the jump only from one side") {
  IntegrandDescriptor step = IntegrandDescriptor::simple(
      SimpleFunction::from_terms(
          1, 1,
          {{Vec{Rat(0)}, Cell::half_open(Rat(0), Rat(1, 2))},
           {Vec{Rat(3)}, Cell::half_open(Rat(1, 2), Rat(1))}}));
  std::vector<Rat> right = {Rat(1, 4), Rat(1, 16), Rat(1, 64)};
  LebesguePointReport r =
      lebesgue_point_probe(step, Rat(1, 2), right, Rat(1, 100));
  CHECK(r.averages == std::vector<Rat>{Rat(0), Rat(0), Rat(0)});
  CHECK(r.converged);

  std::vector<Rat> left = {Rat(-1, 4), Rat(-1, 16), Rat(-1, 64)};
  LebesguePointReport l =
      lebesgue_point_probe(step, Rat(1, 2), left, Rat(1, 100));
  CHECK(l.averages == std::vector<Rat>{Rat(3), Rat(3), Rat(3)});
  CHECK_FALSE(l.converged);
}

TEST_CASE("lebesgue point averages vanish at continuity points") {
  auto lip = IntegrandDescriptor::lipschitz(
      Expr::parse("3*x+1"), Rat(3), Cell::half_open(Rat(0), Rat(1)));
  std::vector<Rat> sched = {Rat(1, 4), Rat(1, 64), Rat(1, 1024)};
  LebesguePointReport r =
      lebesgue_point_probe(lip, Rat(1, 3), sched, Rat(1, 100));
  REQUIRE(r.averages.size() == 3);
  // the true average over [p, p+h) of |3(x-p)| is 3h/2
  for (std::size_t i = 0; i < sched.size(); ++i)
    CHECK(abs_rat(r.averages[i] - Rat(3, 2) * sched[i]) <=
          r.error_bounds[i]);
  CHECK(r.converged);

  IntegrandDescriptor flat = IntegrandDescriptor::simple(
      SimpleFunction::from_terms(
          1, 1, {{Vec{Rat(5)}, Cell::half_open(Rat(0), Rat(1))}}));
  LebesguePointReport c =
      lebesgue_point_probe(flat, Rat(1, 2), sched, Rat(1, 1000));
  for (const Rat& avg : c.averages) CHECK(avg == Rat(0));
  CHECK(c.converged);

  auto mono = IntegrandDescriptor::monotone(
      Expr::parse("x"), Cell::half_open(Rat(0), Rat(1)), true);
  CHECK_THROWS_AS(lebesgue_point_probe(mono, Rat(1, 2), sched, Rat(1, 100)),
                  Error);
  CHECK_THROWS_AS(lebesgue_point_probe(lip, Rat(1, 2), {Rat(0)}, Rat(1, 100)),
                  Error);
}

TEST_CASE("integration by parts is exact for polynomial pairs") {
  FunctionProbe F = probe_of("x");
  F.lipschitz = Rat(1);
  FunctionProbe G = probe_of("x^2");
  G.lipschitz = Rat(2);
  auto f = IntegrandDescriptor::lipschitz(Expr::parse("1"), Rat(0),
                                          Cell::half_open(Rat(0), Rat(1)));
  auto g = IntegrandDescriptor::lipschitz(Expr::parse("2*x"), Rat(2),
                                          Cell::half_open(Rat(0), Rat(1)));
  PartsReport r =
      parts_check(F, G, f, g, Rat(0), Rat(1), Rat(1, 1000000000));
  CHECK(r.exact);
  CHECK(r.boundary == Rat(1));
  CHECK(r.left.value[0] == Rat(1, 3));
  CHECK(r.right.value[0] == Rat(2, 3));
  CHECK(r.residual == Rat(0));
  CHECK(r.ok);

  // the zero probe against anything stays zero on both sides
  FunctionProbe Z = probe_of("0");
  auto z = IntegrandDescriptor::lipschitz(Expr::parse("0"), Rat(0),
                                          Cell::half_open(Rat(0), Rat(1)));
  PartsReport rz = parts_check(Z, G, z, g, Rat(0), Rat(1), Rat(0));
  CHECK(rz.residual == Rat(0));
  CHECK(rz.ok);
}

TEST_CASE("integration by parts holds for random polynomial primitives") {
  Rng rng(0x5eed);
  for (int trial = 0; trial < 40; ++trial) {
    // random cubic F and quadratic G with their true derivatives
    std::vector<Rat> cf, cg;
    for (int i = 0; i < 4; ++i) cf.push_back(rng.rat(3, 4));
    for (int i = 0; i < 3; ++i) cg.push_back(rng.rat(3, 4));
    auto poly_src = [](const std::vector<Rat>& c) {
      std::string s = "(" + format_rat(c[0]) + ")";
      for (std::size_t k = 1; k < c.size(); ++k)
        s += "+(" + format_rat(c[k]) + ")*x^" + std::to_string(k);
      return s;
    };
    auto deriv_src = [](const std::vector<Rat>& c) {
      std::string s = "(" + format_rat(c.size() > 1 ? c[1] : Rat(0)) + ")";
      for (std::size_t k = 2; k < c.size(); ++k)
        s += "+(" + format_rat(c[k] * Rat(int(k))) + ")*x^" +
             std::to_string(k - 1);
      return s;
    };
    FunctionProbe F = probe_of(poly_src(cf));
    FunctionProbe G = probe_of(poly_src(cg));
    Cell dom = Cell::half_open(Rat(-1), Rat(2));
    auto f = IntegrandDescriptor::lipschitz(Expr::parse(deriv_src(cf)),
                                            Rat(100), dom);
    auto g = IntegrandDescriptor::lipschitz(Expr::parse(deriv_src(cg)),
                                            Rat(100), dom);
    PartsReport r = parts_check(F, G, f, g, Rat(-1), Rat(2), Rat(0));
    CHECK(r.exact);
    CHECK(r.residual == Rat(0));
    CHECK(r.ok);
  }
}

TEST_CASE("integration by parts certifies the sine pair in decimal mode") {
  FunctionProbe S = probe_of("sin(x)");
  S.lipschitz = Rat(1);
  S.digits = 9;
  auto cosd = IntegrandDescriptor::lipschitz(
      Expr::parse("cos(x)"), Rat(1), Cell::half_open(Rat(0), Rat(2)));

  PartsReport fine =
      parts_check(S, S, cosd, cosd, Rat(0), Rat(1, 32), Rat(1, 1000000));
  CHECK(fine.ok);
  CHECK(fine.residual <= fine.allowance);
  // both sides together equal sin^2 at the right endpoint
  Rat ref = sin_dec(Rat(1, 32), 20);
  CHECK(abs_rat(fine.left.value[0] + fine.right.value[0] - ref * ref) <=
        fine.left.error_bound + fine.right.error_bound + Rat(1, 1000000));

  PartsReport wide =
      parts_check(S, S, cosd, cosd, Rat(0), Rat(157, 100), Rat(1, 1000));
  CHECK(wide.ok);
  Rat refw = sin_dec(Rat(157, 100), 20);
  CHECK(abs_rat(wide.left.value[0] + wide.right.value[0] - refw * refw) <=
        wide.left.error_bound + wide.right.error_bound + Rat(1, 1000));
}

TEST_CASE("probe evaluation honors overrides, exactness, and the hook") {
  FunctionProbe sq = probe_of("x^2");
  CHECK(sq.eval(Rat(1, 3)) == Rat(1, 9));
  CHECK(sq.exact_values());

  FunctionProbe osc = oscillation_probe(11);
  CHECK(osc.eval(Rat(0)) == Rat(0));
  CHECK_FALSE(osc.exact_values());
  // the hook meets the certified-error contract of plain decimal mode
  Rat direct = osc.value.eval_dec({Rat(1, 2)}, 14);
  CHECK(abs_rat(osc.eval(Rat(1, 2)) - direct) <= Rat(2, pow10(11)));
}
