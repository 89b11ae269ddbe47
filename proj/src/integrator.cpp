#include "prering/integrator.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <utility>

#include "prering/dyadic.hpp"
#include "prering/errors.hpp"

namespace prering {

namespace {

// Streaming evaluates cells one at a time; materializing stores them as
// simple-function terms. Both caps keep a single level affordable; deeper
// levels must go through the closed-form polynomial path.
constexpr int kStreamLevelCap = 22;
constexpr int kMaterializeLevelCap = 12;
constexpr int kBasicIndexCap = 40;
constexpr int kModulusLevelCap = 200;
constexpr unsigned kOracleDigits = 11;
// Per-evaluation error is 10^-kOracleDigits; the paddings below leave two
// and three orders of margin over it.
constexpr unsigned kSlackDigits = kOracleDigits - 2;
constexpr unsigned kReportSlackDigits = kOracleDigits - 3;

// Per-piece approximation-error model for E(L), the certified bound on
// ||f - s_L|| over the piece at dyadic level L.
enum class ErrModel {
  kGeometric,  // E(L) = err0 * 2^-L
  kModulus,    // E(L) = omega((hi-lo) 2^-L) * vmass
  kStreamed,   // monotone against an irregular measure: summed exactly
};

struct Piece {
  Rat lo, hi;
  bool lo_closed = true;
  bool hi_closed = false;
  Cell cell = Cell::empty_cell(1);
  Rat fa, fb;    // oracle at the endpoints
  Rat delta;     // |fb - fa|
  Rat maxabs;    // upper bound for |f| on the piece
  Rat vmass;     // v(piece)
  Rat m_const;   // per-piece share of the basic-sequence constant M
  ErrModel model = ErrModel::kGeometric;
  Rat err0;      // E(0) for the geometric model
  std::optional<std::vector<Rat>> fpoly;
  std::optional<std::vector<Rat>> gpoly;  // primitive of the measure
};

struct Plan {
  const IntegrandDescriptor* f = nullptr;
  const Measure* v = nullptr;
  std::vector<Piece> pieces;
  Rat total_m;
  Rat slack;  // per-evaluation padding when oracle or measure is inexact
};

Rat pow4(int n) { return Rat(pow2(static_cast<unsigned>(2 * n))); }

Rat eval_up(const Expr& e, const Rat& x, const Rat& slack) {
  return e.eval({x}, kOracleDigits) + slack;
}

// omega evaluated with upward rounding; a modulus must be nonnegative.
Rat modulus_up(const Plan& plan, const Rat& d) {
  Rat w = eval_up(*plan.f->modulus, d, plan.slack);
  if (w < 0)
    fail(ErrorCode::OracleFailure, "continuity modulus is negative at " +
                                       format_rat(d));
  return w;
}

// The dyadic cell k of a piece at level L carries the piece's closure on
// the outer ends and is half-open inside.
Cell grid_cell(const Piece& p, const Rat& w, std::int64_t k, std::int64_t N) {
  Rat x0 = p.lo + w * Rat(k);
  Rat x1 = (k + 1 == N) ? p.hi : p.lo + w * Rat(k + 1);
  return Cell::make({Interval{{x0, k == 0 ? p.lo_closed : true},
                              {x1, k + 1 == N ? p.hi_closed : false}}});
}

// Exact E(L) for a monotone oracle against an arbitrary measure: the
// oracle increment over each cell times the cell mass. Also verifies the
// declared direction on the partition points.
Rat streamed_error(const Plan& plan, const Piece& p, int L) {
  if (L > kStreamLevelCap)
    fail(ErrorCode::ToleranceUnreachable,
         "dyadic level exceeds the streaming cap");
  const IntegrandDescriptor& f = *plan.f;
  std::int64_t N = INT64_C(1) << L;
  Rat w = (p.hi - p.lo) / Rat(N);
  Rat acc(0);
  Rat prev = p.fa;
  for (std::int64_t k = 0; k < N; ++k) {
    Rat x1 = (k + 1 == N) ? p.hi : p.lo + w * Rat(k + 1);
    Rat next = f.eval_oracle(x1);
    Rat inc = f.increasing ? next - prev : prev - next;
    if (inc < -(plan.slack * 2))
      fail(ErrorCode::MonotonicityViolation,
           "oracle breaks the declared direction near " + format_rat(x1));
    if (inc < 0) inc = 0;
    acc += inc * (*plan.v)(grid_cell(p, w, k, N));
    prev = next;
  }
  return acc + Rat(2) * plan.slack * p.vmass;
}

Rat piece_error(const Plan& plan, const Piece& p, int L) {
  switch (p.model) {
    case ErrModel::kGeometric:
      return p.err0 / Rat(pow2(static_cast<unsigned>(L)));
    case ErrModel::kModulus:
      return modulus_up(plan, (p.hi - p.lo) /
                                  Rat(pow2(static_cast<unsigned>(L)))) *
             p.vmass;
    case ErrModel::kStreamed:
      return L == 0 ? p.delta * p.vmass + Rat(2) * plan.slack * p.vmass
                    : streamed_error(plan, p, L);
  }
  fail(ErrorCode::BadInput, "unreachable");
}

// Least dyadic level whose certified error is at most `target`.
int choose_level(const Plan& plan, const Piece& p, const Rat& target) {
  if (target <= 0)
    fail(ErrorCode::ToleranceUnreachable, "error target is not positive");
  switch (p.model) {
    case ErrModel::kGeometric: {
      int L = 0;
      Rat e = p.err0;
      while (e > target) {
        e /= 2;
        if (++L > 400)
          fail(ErrorCode::ToleranceUnreachable, "dyadic level cap");
      }
      return L;
    }
    case ErrModel::kModulus: {
      for (int L = 0; L <= kModulusLevelCap; ++L)
        if (piece_error(plan, p, L) <= target) return L;
      fail(ErrorCode::ToleranceUnreachable,
           "modulus does not certify the requested tolerance");
    }
    case ErrModel::kStreamed: {
      for (int L = 0; L <= kStreamLevelCap; ++L)
        if (piece_error(plan, p, L) <= target) return L;
      fail(ErrorCode::ToleranceUnreachable,
           "streamed refinement hits the level cap");
    }
  }
  fail(ErrorCode::BadInput, "unreachable");
}

// Primitive of the measure as a polynomial on [lo, hi], when it has one:
// cell mass = g(hi) - g(lo) on every grid cell. This is what makes the
// closed-form summation valid.
std::optional<std::vector<Rat>> measure_primitive(const Measure& v,
                                                  const Rat& lo,
                                                  const Rat& hi) {
  switch (v.kind()) {
    case MeasureKind::kLength:
      return std::vector<Rat>{Rat(0), Rat(1)};
    case MeasureKind::kVolume:
      if (v.expected_dims() <= 1) return std::vector<Rat>{Rat(0), Rat(1)};
      return std::nullopt;
    case MeasureKind::kStieltjes:
      return v.integrator()->polynomial_on(lo, hi);
    default:
      return std::nullopt;
  }
}

// A closed-form sum samples the oracle on every grid point; none of them
// may lie in the measure's excluded endpoint set. d is on the level-L
// grid of [lo, hi] iff (d - lo)/(hi - lo) has a power-of-two denominator
// with exponent at most L.
void check_grid_avoids_excluded(const Measure& v, const Piece& p, int L) {
  for (const Rat& d : v.excluded()) {
    if (d < p.lo || d > p.hi) continue;
    Rat r = (d - p.lo) / (p.hi - p.lo);
    Int den = boost::multiprecision::denominator(r);
    int e = 0;
    while ((den & 1) == 0) {
      den >>= 1;
      ++e;
    }
    if (den == 1 && e <= L)
      fail(ErrorCode::StieltjesEndpointInD,
           "dyadic grid hits excluded point " + format_rat(d));
  }
}

// Exact integral of the level-L step approximation over one piece.
Rat piece_value(const Plan& plan, const Piece& p, int L) {
  if (p.hi == p.lo) return p.fa * p.vmass;
  const IntegrandDescriptor& f = *plan.f;
  bool right_samples =
      f.kind == IntegrandDescriptor::Kind::kMonotone && !f.increasing;
  if (p.fpoly && p.gpoly) {
    check_grid_avoids_excluded(*plan.v, p, L);
    return dyadic_poly_sum(*p.fpoly, *p.gpoly, p.lo, p.hi, L, right_samples);
  }
  if (L > kStreamLevelCap)
    fail(ErrorCode::ToleranceUnreachable,
         "level needs a closed form the integrand does not provide");
  std::int64_t N = INT64_C(1) << L;
  Rat w = (p.hi - p.lo) / Rat(N);
  Rat acc(0);
  for (std::int64_t k = 0; k < N; ++k) {
    Rat cv = (*plan.v)(grid_cell(p, w, k, N));
    if (cv == 0) continue;
    Rat x = p.lo + w * Rat(right_samples ? k + 1 : k);
    acc += f.eval_oracle(x) * cv;
  }
  return acc;
}

// Sampled falsifier for the declared regularity; violation errors carry
// the witness point. 32 deterministic pairs per piece.
void verify_oracle_samples(const Plan& plan) {
  const IntegrandDescriptor& f = *plan.f;
  Rng root(0x09a1e5u);
  Rat two_slack = Rat(2) * plan.slack;
  for (size_t i = 0; i < plan.pieces.size(); ++i) {
    const Piece& p = plan.pieces[i];
    if (p.hi == p.lo) continue;
    Rng rng = root.fork(i);
    for (int s = 0; s < 32; ++s) {
      Rat x = p.lo + (p.hi - p.lo) * Rat(Int(rng.below(1u << 20)), pow2(20));
      Rat y = p.lo + (p.hi - p.lo) * Rat(Int(rng.below(1u << 20)), pow2(20));
      if (x == y) continue;
      if (y < x) std::swap(x, y);
      Rat fx = f.eval_oracle(x);
      Rat fy = f.eval_oracle(y);
      switch (f.kind) {
        case IntegrandDescriptor::Kind::kMonotone: {
          Rat inc = f.increasing ? fy - fx : fx - fy;
          if (inc < -two_slack)
            fail(ErrorCode::MonotonicityViolation,
                 "oracle breaks the declared direction between " +
                     format_rat(x) + " and " + format_rat(y));
          break;
        }
        case IntegrandDescriptor::Kind::kLipschitz:
          if (abs_rat(fy - fx) > f.lipschitz_bound * (y - x) + two_slack)
            fail(ErrorCode::LipschitzViolation,
                 "oracle exceeds the declared rate between " + format_rat(x) +
                     " and " + format_rat(y));
          break;
        case IntegrandDescriptor::Kind::kPiecewiseContinuous:
          if (abs_rat(fy - fx) > modulus_up(plan, y - x) + two_slack)
            fail(ErrorCode::OracleFailure,
                 "oracle exceeds the declared modulus between " +
                     format_rat(x) + " and " + format_rat(y));
          break;
        default:
          break;
      }
    }
  }
}

Plan build_plan(const IntegrandDescriptor& f, const Measure& v) {
  if (!f.oracle_kind())
    fail(ErrorCode::UnsupportedDescriptor,
         "refinement plans apply to oracle kinds");
  if (!f.domain)
    fail(ErrorCode::BadInput, "oracle integrand needs a domain");
  const Cell& dom = *f.domain;
  if (dom.dims() != 1)
    fail(ErrorCode::DimensionMismatch, "oracle integrands live on 1-D cells");
  Plan plan;
  plan.f = &f;
  plan.v = &v;
  plan.slack = (f.exact_eval() && v.exact())
                   ? Rat(0)
                   : Rat(Int(1), pow10(kSlackDigits));
  plan.total_m = Rat(0);
  if (dom.empty()) return plan;
  const Interval& bi = dom.bound(0);
  std::vector<Rat> pts;
  pts.push_back(bi.lo.value);
  for (const Rat& b : f.breakpoints)
    if (b > bi.lo.value && b < bi.hi.value) pts.push_back(b);
  pts.push_back(bi.hi.value);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (size_t i = 0; i + 1 < pts.size() || (i == 0 && pts.size() == 1); ++i) {
    Piece p;
    p.lo = pts[i];
    p.hi = pts.size() == 1 ? pts[0] : pts[i + 1];
    p.lo_closed = (i == 0) ? bi.lo.closed : true;
    p.hi_closed = (i + 2 >= pts.size()) ? bi.hi.closed : false;
    p.cell = Cell::make(
        {Interval{{p.lo, p.lo_closed}, {p.hi, p.hi_closed}}});
    p.vmass = v(p.cell);
    p.fa = f.eval_oracle(p.lo);
    p.fb = f.eval_oracle(p.hi);
    p.delta = abs_rat(p.fb - p.fa);
    Rat width = p.hi - p.lo;
    switch (f.kind) {
      case IntegrandDescriptor::Kind::kMonotone:
        p.maxabs = std::max(abs_rat(p.fa), abs_rat(p.fb)) + plan.slack;
        break;
      case IntegrandDescriptor::Kind::kLipschitz:
        p.maxabs = abs_rat(p.fa) + f.lipschitz_bound * width + plan.slack;
        break;
      case IntegrandDescriptor::Kind::kPiecewiseContinuous:
        p.maxabs = abs_rat(p.fa) + modulus_up(plan, std::max(width, Rat(0))) +
                   plan.slack;
        break;
      default:
        break;
    }
    p.fpoly = f.oracle->polynomial_on(p.lo, p.hi);
    p.gpoly = measure_primitive(v, p.lo, p.hi);
    if (width == 0) {
      p.model = ErrModel::kGeometric;
      p.err0 = Rat(0);
    } else if (f.kind == IntegrandDescriptor::Kind::kLipschitz) {
      p.model = ErrModel::kGeometric;
      p.err0 = f.lipschitz_bound * width * p.vmass +
               Rat(2) * plan.slack * p.vmass;
    } else if (f.kind == IntegrandDescriptor::Kind::kPiecewiseContinuous) {
      p.model = ErrModel::kModulus;
    } else if (p.gpoly) {
      // Cell mass at level L is at most Lg * width * 2^-L for the
      // derivative bound Lg of the primitive.
      p.model = ErrModel::kGeometric;
      p.err0 = (p.delta + Rat(2) * plan.slack) *
                   poly_derivative_bound(*p.gpoly, p.lo, p.hi) * width +
               Rat(2) * plan.slack * p.vmass;
    } else {
      p.model = ErrModel::kStreamed;
    }
    p.m_const = Rat(4) * (p.maxabs * p.vmass + piece_error(plan, p, 0));
    plan.total_m += p.m_const;
    plan.pieces.push_back(std::move(p));
    if (pts.size() == 1) break;
  }
  return plan;
}

// Least n >= 1 with M 4^-n / 3 <= tol.
int choose_basic_index(const Rat& m, const Rat& tol) {
  int n = 1;
  while (m / (Rat(3) * pow4(n)) > tol) {
    if (++n > kBasicIndexCap)
      fail(ErrorCode::ToleranceUnreachable, "basic index cap");
  }
  return n;
}

// Target E(L_n) <= M_piece 4^-(n+1) / 2; together with the triangle
// inequality through f this gives ||h_n|| <= M 4^-n for the re-indexed
// increments and tail ||f - s_n|| <= M 4^-n / 8.
int level_for_index(const Plan& plan, const Piece& p, int n) {
  Rat target = p.m_const / (Rat(2) * pow4(n + 1));
  return choose_level(plan, p, target);
}

Vec point_eval(const IntegrandDescriptor& d,
               const std::optional<SimpleFunction>& resolved, const Rat& x) {
  if (d.oracle_kind()) return {d.eval_oracle(x)};
  return resolved->eval1(x);
}

std::optional<SimpleFunction> resolve_if_exact(const IntegrandDescriptor& d) {
  if (d.oracle_kind()) return std::nullopt;
  return d.resolve_simple();
}

Rat report_slack(const std::vector<const IntegrandDescriptor*>& ds) {
  for (const IntegrandDescriptor* d : ds)
    if (!d->exact_eval()) return Rat(Int(1), pow10(kReportSlackDigits));
  return Rat(0);
}

}  // namespace

IntegrandDescriptor IntegrandDescriptor::monotone(Expr oracle, Cell domain,
                                                  bool increasing,
                                                  std::vector<Rat> breakpoints) {
  if (domain.dims() != 1)
    fail(ErrorCode::DimensionMismatch, "oracle integrands live on 1-D cells");
  if (oracle.arity() > 1)
    fail(ErrorCode::BadInput, "oracle must be a function of x");
  IntegrandDescriptor d;
  d.kind = Kind::kMonotone;
  d.oracle = std::move(oracle);
  d.increasing = increasing;
  d.domain = std::move(domain);
  d.breakpoints = std::move(breakpoints);
  return d;
}

IntegrandDescriptor IntegrandDescriptor::lipschitz(Expr oracle, Rat bound,
                                                   Cell domain,
                                                   std::vector<Rat> breakpoints) {
  if (domain.dims() != 1)
    fail(ErrorCode::DimensionMismatch, "oracle integrands live on 1-D cells");
  if (oracle.arity() > 1)
    fail(ErrorCode::BadInput, "oracle must be a function of x");
  if (bound < 0) fail(ErrorCode::BadInput, "rate bound must be nonnegative");
  IntegrandDescriptor d;
  d.kind = Kind::kLipschitz;
  d.oracle = std::move(oracle);
  d.lipschitz_bound = std::move(bound);
  d.domain = std::move(domain);
  d.breakpoints = std::move(breakpoints);
  return d;
}

IntegrandDescriptor IntegrandDescriptor::piecewise_continuous(
    Expr oracle, Expr modulus, Cell domain, std::vector<Rat> breakpoints) {
  if (domain.dims() != 1)
    fail(ErrorCode::DimensionMismatch, "oracle integrands live on 1-D cells");
  if (oracle.arity() > 1 || modulus.arity() > 1)
    fail(ErrorCode::BadInput, "oracle and modulus must be functions of x");
  IntegrandDescriptor d;
  d.kind = Kind::kPiecewiseContinuous;
  d.oracle = std::move(oracle);
  d.modulus = std::move(modulus);
  d.domain = std::move(domain);
  d.breakpoints = std::move(breakpoints);
  return d;
}

IntegrandDescriptor IntegrandDescriptor::composite(BilinearOp op,
                                                   SimpleFunction lhs,
                                                   SimpleFunction rhs) {
  if (lhs.dims() != rhs.dims())
    fail(ErrorCode::DimensionMismatch, "composite factors share a domain");
  op.result_dim(lhs.vdim(), rhs.vdim());  // shape check
  IntegrandDescriptor d;
  d.kind = Kind::kComposite;
  d.op = std::move(op);
  d.lhs = std::move(lhs);
  d.rhs = std::move(rhs);
  return d;
}

IntegrandDescriptor IntegrandDescriptor::simple(SimpleFunction h) {
  IntegrandDescriptor d;
  d.kind = Kind::kSimple;
  d.step = std::move(h);
  return d;
}

bool IntegrandDescriptor::oracle_kind() const {
  return kind == Kind::kMonotone || kind == Kind::kLipschitz ||
         kind == Kind::kPiecewiseContinuous;
}

int IntegrandDescriptor::vdim() const {
  if (oracle_kind()) return 1;
  if (kind == Kind::kComposite) return op->result_dim(lhs->vdim(), rhs->vdim());
  return step->vdim();
}

bool IntegrandDescriptor::exact_eval() const {
  if (!oracle_kind()) return true;
  if (!oracle->exact()) return false;
  return !modulus || modulus->exact();
}

Rat IntegrandDescriptor::eval_oracle(const Rat& x) const {
  return oracle->eval({x}, kOracleDigits);
}

SimpleFunction IntegrandDescriptor::resolve_simple() const {
  if (kind == Kind::kSimple) return *step;
  if (kind != Kind::kComposite)
    fail(ErrorCode::UnsupportedDescriptor,
         "only the exact kinds resolve to a simple function");
  const SimpleFunction& a = *lhs;
  const SimpleFunction& b = *rhs;
  int rdim = op->result_dim(a.vdim(), b.vdim());
  std::vector<SimpleFunction::Term> out;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      SimpleSet meet = simple_intersect(SimpleSet::single(ta.cell),
                                        SimpleSet::single(tb.cell));
      for (const Cell& c : meet.cells()) out.push_back({op->apply(ta.y, tb.y), c});
    }
  return SimpleFunction::from_terms(a.dims(), rdim, out);
}

Vec IntegrandDescriptor::eval_point(const Rat& x) const {
  if (oracle_kind()) return {eval_oracle(x)};
  return resolve_simple().eval1(x);
}

void IntegrandDescriptor::sample_range(Rat* lo, Rat* hi) const {
  if (oracle_kind()) {
    *lo = domain->bound(0).lo.value;
    *hi = domain->bound(0).hi.value;
    return;
  }
  bool any = false;
  Rat l(0), h(1);
  auto scan = [&](const SimpleFunction& s) {
    for (const auto& t : s.terms()) {
      if (t.cell.empty() || t.cell.dims() != 1) continue;
      const Interval& b = t.cell.bound(0);
      if (!any || b.lo.value < l) l = b.lo.value;
      if (!any || b.hi.value > h) h = b.hi.value;
      any = true;
    }
  };
  if (kind == Kind::kComposite) {
    scan(*lhs);
    scan(*rhs);
  } else {
    scan(*step);
  }
  *lo = l;
  *hi = h;
}

SimpleFunction BasicSequence::partial(int n) const {
  if (increments.empty()) return SimpleFunction(1, 1);
  SimpleFunction s(increments[0].dims(), increments[0].vdim());
  int take = std::min<int>(n, static_cast<int>(increments.size()));
  for (int i = 0; i < take; ++i) s = s.plus(increments[i]);
  return s;
}

BasicSequence build_basic_sequence(const IntegrandDescriptor& f,
                                   const Measure& v, int levels) {
  if (levels < 0 || levels > 60)
    fail(ErrorCode::BadInput, "level count out of range");
  BasicSequence seq;
  seq.bound = Rat(0);
  if (!f.oracle_kind()) {
    // An exact integrand is its own first increment; the rest vanish.
    SimpleFunction h = f.resolve_simple();
    Radical nm = seminorm(h, v);
    Rat up = nm.is_rational() ? nm.rational_value() : nm.upper(20);
    seq.bound = Rat(4) * up;
    for (int n = 1; n <= levels; ++n) {
      seq.increments.push_back(n == 1 ? h
                                      : SimpleFunction(h.dims(), h.vdim()));
      seq.dyadic_levels.push_back(0);
    }
    return seq;
  }
  Plan plan = build_plan(f, v);
  verify_oracle_samples(plan);
  seq.bound = plan.total_m;
  SimpleFunction prev(1, 1);
  for (int n = 1; n <= levels; ++n) {
    std::vector<SimpleFunction::Term> terms;
    int max_level = 0;
    for (const Piece& p : plan.pieces) {
      if (p.hi == p.lo) {
        terms.push_back({{p.fa}, p.cell});
        continue;
      }
      int L = p.m_const == 0 ? 0 : level_for_index(plan, p, n);
      if (L > kMaterializeLevelCap)
        fail(ErrorCode::ToleranceUnreachable,
             "level exceeds the materialization cap");
      max_level = std::max(max_level, L);
      bool right_samples =
          f.kind == IntegrandDescriptor::Kind::kMonotone && !f.increasing;
      std::int64_t N = INT64_C(1) << L;
      Rat w = (p.hi - p.lo) / Rat(N);
      Rat prev_sample = f.eval_oracle(right_samples ? p.lo + w : p.lo);
      for (std::int64_t k = 0; k < N; ++k) {
        Rat x = p.lo + w * Rat(right_samples ? k + 1 : k);
        Rat y = k == 0 ? prev_sample : f.eval_oracle(x);
        if (f.kind == IntegrandDescriptor::Kind::kMonotone && k > 0) {
          Rat inc = f.increasing ? y - prev_sample : prev_sample - y;
          if (inc < -(plan.slack * 2))
            fail(ErrorCode::MonotonicityViolation,
                 "oracle breaks the declared direction near " + format_rat(x));
        }
        prev_sample = y;
        terms.push_back({{y}, grid_cell(p, w, k, N)});
      }
    }
    SimpleFunction s = SimpleFunction::from_terms(1, 1, terms);
    SimpleFunction h = s.plus(prev.scaled(Rat(-1)));
    Radical nm = seminorm(h, v);
    if (Radical::compare(nm, Radical::from_rat(seq.bound / pow4(n))) > 0)
      fail(ErrorCode::RuleViolation,
           "increment seminorm exceeds the geometric bound");
    seq.increments.push_back(std::move(h));
    seq.dyadic_levels.push_back(max_level);
    prev = std::move(s);
  }
  return seq;
}

Rat dyadic_lower_sum(const IntegrandDescriptor& f, const Measure& v,
                     int level) {
  if (!f.oracle_kind())
    fail(ErrorCode::UnsupportedDescriptor,
         "dyadic sums apply to oracle kinds");
  if (level < 0 || level > kModulusLevelCap)
    fail(ErrorCode::BadInput, "level out of range");
  Plan plan = build_plan(f, v);
  Rat acc(0);
  for (const Piece& p : plan.pieces) acc += piece_value(plan, p, level);
  return acc;
}

IntegralResult integrate(const IntegrandDescriptor& f, const Measure& v,
                         const Rat& tol) {
  if (tol <= 0) fail(ErrorCode::BadInput, "tolerance must be positive");
  if (!f.oracle_kind()) {
    SimpleFunction h = f.resolve_simple();
    return {integral(h, v), Rat(0), 0};
  }
  Plan plan = build_plan(f, v);
  verify_oracle_samples(plan);
  if (plan.total_m == 0) return {{Rat(0)}, Rat(0), 0};
  int n = choose_basic_index(plan.total_m, tol);
  Rat value(0);
  for (const Piece& p : plan.pieces) {
    if (p.m_const == 0) continue;
    value += piece_value(plan, p, level_for_index(plan, p, n));
  }
  return {{value}, plan.total_m / (Rat(3) * pow4(n)), n};
}

IntegralResult trilinear_integrate(const BilinearOp& u,
                                   const IntegrandDescriptor& f,
                                   const VectorMeasure& mu, const Rat& tol) {
  if (tol <= 0) fail(ErrorCode::BadInput, "tolerance must be positive");
  if (!f.oracle_kind()) {
    SimpleFunction h = f.resolve_simple();
    return {trilinear_integral(u, h, mu), Rat(0), 0};
  }
  int rdim = u.result_dim(1, mu.zdim());
  // Split at the density grid so every piece sees one constant density.
  IntegrandDescriptor g = f;
  if (!mu.is_constant()) {
    for (const auto& t : mu.grid()) {
      if (t.cell.dims() != 1)
        fail(ErrorCode::DimensionMismatch,
             "oracle integrands pair with 1-D density grids");
      g.breakpoints.push_back(t.cell.bound(0).lo.value);
      g.breakpoints.push_back(t.cell.bound(0).hi.value);
    }
  }
  Plan plan = build_plan(g, mu.base());
  verify_oracle_samples(plan);
  Radical nm = mu.norm();
  Rat mu_up = nm.is_rational() ? nm.rational_value() : nm.upper(20);
  Rat scaled_m = plan.total_m * mu_up * u.norm_bound();
  if (scaled_m == 0) return {vec_zero(rdim), Rat(0), 0};
  int n = choose_basic_index(scaled_m, tol);
  Vec value = vec_zero(rdim);
  for (const Piece& p : plan.pieces) {
    if (p.m_const == 0 || p.vmass == 0) continue;
    Rat mid = p.hi == p.lo ? p.lo : (p.lo + p.hi) / 2;
    Vec density = vec_zero(mu.zdim());
    if (mu.is_constant()) {
      density = mu.constant_density();
    } else {
      for (const auto& t : mu.grid())
        if (t.cell.contains1(mid)) {
          density = t.y;
          break;
        }
    }
    if (vec_is_zero(density)) continue;
    Rat piece_integral = piece_value(plan, p, level_for_index(plan, p, n));
    value = vec_add(value, u.apply({piece_integral}, density));
  }
  return {value, scaled_m / (Rat(3) * pow4(n)), n};
}

ConvergenceReport monotone_convergence_check(
    const std::vector<IntegrandDescriptor>& fn, const Measure& v, int samples,
    const Rat& tol, Rng rng) {
  if (fn.empty()) fail(ErrorCode::BadInput, "empty sequence");
  std::vector<const IntegrandDescriptor*> all;
  for (const auto& d : fn) all.push_back(&d);
  Rat slack = report_slack(all);
  Rat lo, hi;
  fn[0].sample_range(&lo, &hi);
  for (const auto& d : fn) {
    Rat l, h;
    d.sample_range(&l, &h);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  std::vector<std::optional<SimpleFunction>> resolved;
  for (const auto& d : fn) {
    if (d.vdim() != 1)
      fail(ErrorCode::BadInput, "monotone comparison needs scalar values");
    resolved.push_back(resolve_if_exact(d));
  }
  for (size_t k = 0; k + 1 < fn.size(); ++k) {
    Rng r = rng.fork(k);
    for (int s = 0; s < samples; ++s) {
      Rat x = lo + (hi - lo) * Rat(Int(r.below(1u << 20)), pow2(20));
      Rat a = point_eval(fn[k], resolved[k], x)[0];
      Rat b = point_eval(fn[k + 1], resolved[k + 1], x)[0];
      if (b < a - slack)
        fail(ErrorCode::MonotonicityViolation,
             "sequence decreases at x = " + format_rat(x) + " between terms " +
                 std::to_string(k) + " and " + std::to_string(k + 1));
    }
  }
  ConvergenceReport rep;
  for (const auto& d : fn) {
    IntegralResult r = integrate(d, v, tol);
    rep.integrals.push_back(r.value);
    rep.error_bounds.push_back(r.error_bound);
  }
  rep.ok = true;
  std::ostringstream detail;
  for (size_t k = 0; k + 1 < fn.size(); ++k) {
    Rat gap = rep.integrals[k + 1][0] - rep.integrals[k][0];
    rep.gaps.push_back(gap);
    if (gap < -(rep.error_bounds[k] + rep.error_bounds[k + 1])) rep.ok = false;
  }
  for (size_t k = 1; k < rep.gaps.size(); ++k) {
    Rat window = rep.error_bounds[k - 1] + Rat(2) * rep.error_bounds[k] +
                 rep.error_bounds[k + 1];
    if (rep.gaps[k] > rep.gaps[k - 1] + window) rep.ok = false;
  }
  for (size_t k = 0; k < rep.integrals.size(); ++k)
    detail << "integral[" << k << "] = " << format_rat(rep.integrals[k][0])
           << " +/- " << format_rat(rep.error_bounds[k]) << "\n";
  rep.detail = detail.str();
  return rep;
}

ConvergenceReport dominated_convergence_check(
    const std::vector<IntegrandDescriptor>& fn,
    const IntegrandDescriptor& limit, const IntegrandDescriptor& dominator,
    const Measure& v, int samples, const Rat& tol, Rng rng) {
  if (fn.empty()) fail(ErrorCode::BadInput, "empty sequence");
  if (dominator.vdim() != 1)
    fail(ErrorCode::BadInput, "dominator must be scalar");
  std::vector<const IntegrandDescriptor*> all;
  for (const auto& d : fn) all.push_back(&d);
  all.push_back(&limit);
  all.push_back(&dominator);
  Rat slack = report_slack(all);
  Rat lo, hi;
  limit.sample_range(&lo, &hi);
  for (const auto& d : fn) {
    Rat l, h;
    d.sample_range(&l, &h);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  std::vector<std::optional<SimpleFunction>> resolved;
  for (const auto& d : fn) resolved.push_back(resolve_if_exact(d));
  std::optional<SimpleFunction> dom_resolved = resolve_if_exact(dominator);
  for (size_t k = 0; k < fn.size(); ++k) {
    Rng r = rng.fork(k);
    for (int s = 0; s < samples; ++s) {
      Rat x = lo + (hi - lo) * Rat(Int(r.below(1u << 20)), pow2(20));
      Vec y = point_eval(fn[k], resolved[k], x);
      Rat g = point_eval(dominator, dom_resolved, x)[0];
      if (g < -slack)
        fail(ErrorCode::DominationViolation,
             "dominator is negative at x = " + format_rat(x));
      Rat bound = g + slack;
      if (vec_norm_sq(y) > bound * bound)
        fail(ErrorCode::DominationViolation,
             "term " + std::to_string(k) + " exceeds the dominator at x = " +
                 format_rat(x));
    }
  }
  ConvergenceReport rep;
  IntegralResult lim = integrate(limit, v, tol);
  for (const auto& d : fn) {
    IntegralResult r = integrate(d, v, tol);
    if (r.value.size() != lim.value.size())
      fail(ErrorCode::DimensionMismatch, "sequence and limit value spaces");
    rep.integrals.push_back(r.value);
    rep.error_bounds.push_back(r.error_bound);
  }
  rep.ok = true;
  for (size_t k = 0; k < fn.size(); ++k) {
    Rat d(0);
    for (size_t j = 0; j < lim.value.size(); ++j)
      d += abs_rat(rep.integrals[k][j] - lim.value[j]);
    rep.gaps.push_back(d);
  }
  for (size_t k = 1; k < rep.gaps.size(); ++k) {
    Rat window = rep.error_bounds[k - 1] + rep.error_bounds[k] +
                 Rat(2) * lim.error_bound;
    if (rep.gaps[k] > rep.gaps[k - 1] + window) rep.ok = false;
  }
  std::ostringstream detail;
  detail << "limit integral = " << format_vec(lim.value) << " +/- "
         << format_rat(lim.error_bound) << "\n";
  for (size_t k = 0; k < rep.gaps.size(); ++k)
    detail << "distance[" << k << "] = " << format_rat(rep.gaps[k]) << "\n";
  rep.detail = detail.str();
  return rep;
}

ConvergenceReport fatou_check(const std::vector<IntegrandDescriptor>& fn,
                              const IntegrandDescriptor& liminf,
                              const Measure& v, int samples, const Rat& tol,
                              Rng rng) {
  if (fn.empty()) fail(ErrorCode::BadInput, "empty sequence");
  if (liminf.vdim() != 1)
    fail(ErrorCode::BadInput, "liminf comparison needs scalar values");
  std::vector<const IntegrandDescriptor*> all;
  for (const auto& d : fn) all.push_back(&d);
  all.push_back(&liminf);
  Rat slack = report_slack(all);
  Rat lo, hi;
  liminf.sample_range(&lo, &hi);
  for (const auto& d : fn) {
    Rat l, h;
    d.sample_range(&l, &h);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  std::vector<std::optional<SimpleFunction>> resolved;
  for (const auto& d : fn) {
    if (d.vdim() != 1)
      fail(ErrorCode::BadInput, "liminf comparison needs scalar values");
    resolved.push_back(resolve_if_exact(d));
  }
  std::optional<SimpleFunction> lim_resolved = resolve_if_exact(liminf);
  for (size_t k = 0; k < fn.size(); ++k) {
    Rng r = rng.fork(k);
    for (int s = 0; s < samples; ++s) {
      Rat x = lo + (hi - lo) * Rat(Int(r.below(1u << 20)), pow2(20));
      Rat a = point_eval(liminf, lim_resolved, x)[0];
      Rat b = point_eval(fn[k], resolved[k], x)[0];
      if (a > b + slack)
        fail(ErrorCode::DominationViolation,
             "liminf exceeds term " + std::to_string(k) + " at x = " +
                 format_rat(x));
    }
  }
  ConvergenceReport rep;
  IntegralResult lim = integrate(liminf, v, tol);
  std::optional<Rat> tail_min;
  for (const auto& d : fn) {
    IntegralResult r = integrate(d, v, tol);
    rep.integrals.push_back(r.value);
    rep.error_bounds.push_back(r.error_bound);
    Rat up = r.value[0] + r.error_bound;
    if (!tail_min || up < *tail_min) tail_min = up;
  }
  rep.ok = lim.value[0] - lim.error_bound <= *tail_min;
  std::ostringstream detail;
  detail << "integral(liminf) = " << format_rat(lim.value[0]) << " +/- "
         << format_rat(lim.error_bound) << ", min integral = "
         << format_rat(*tail_min) << "\n";
  rep.detail = detail.str();
  return rep;
}

bool series_commutation_check(const std::vector<SimpleFunction>& terms,
                              const Measure& v) {
  if (terms.empty()) return true;
  SimpleFunction sum(terms[0].dims(), terms[0].vdim());
  Vec rhs = vec_zero(terms[0].vdim());
  for (const auto& t : terms) {
    sum = sum.plus(t);
    rhs = vec_add(rhs, integral(t, v));
  }
  return integral(sum, v) == rhs;
}

SummableSetResult summable_set(const std::vector<SimpleSet>& recipe,
                               const Measure& v, const Rat& tol) {
  if (recipe.empty()) fail(ErrorCode::BadInput, "empty recipe");
  SimpleSet p = recipe[0];
  for (size_t k = 1; k < recipe.size(); ++k)
    p = simple_intersect(p, recipe[k]);
  SummableSetResult res{p, Rat(0), Rat(0), false,
                        static_cast<int>(recipe.size())};
  Rat mass = v.on_simple(p);
  if (recipe.size() == 1) {
    res.lower = res.upper = mass;
    res.exact = true;
    return res;
  }
  // A strictly decreasing recipe certifies only the bracket
  // [0, v(last stage)] for the limit.
  res.lower = Rat(0);
  res.upper = mass;
  res.exact = mass == 0;
  if (res.upper - res.lower > tol)
    fail(ErrorCode::ToleranceUnreachable,
         "intersection bracket wider than the tolerance");
  return res;
}

}  // namespace prering
