#include "prering/vitali.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "prering/decimal.hpp"
#include "prering/errors.hpp"
#include "prering/measure.hpp"

namespace prering {

namespace {

// Scale descent stops here; a rule that cannot produce a disjoint cell
// after halving this many times is treated as violating its contract.
constexpr int kScaleDescentCap = 200;
// Unsorted interval systems are materialized for sorting up to this size.
constexpr std::int64_t kUnsortedSystemCap = 100000;
// Variation lower bounds accumulate on this decimal grid.
constexpr unsigned kVariationGridDigits = 12;

bool closed_nonempty_1d(const Cell& c) {
  return !c.empty() && c.dims() == 1 && c.bound(0).lo.closed &&
         c.bound(0).hi.closed;
}

Rat cell_length(const Cell& c) {
  return c.empty() ? Rat(0) : c.bound(0).length();
}

bool inside_1d(const Cell& inner, const Cell& outer) {
  if (inner.empty()) return true;
  return inner.bound(0).lo.value >= outer.bound(0).lo.value &&
         inner.bound(0).hi.value <= outer.bound(0).hi.value;
}

void require_closed_ambient(const Cell& X, const char* who) {
  if (!closed_nonempty_1d(X) || !(cell_length(X) > 0))
    fail(ErrorCode::BadInput,
         std::string(who) + " needs a closed ambient interval of positive "
                            "length");
}

// Closed intervals touch when they share an endpoint, so disjointness is
// a strict gap between sorted neighbors.
bool disjoint_from_sorted(const std::vector<Cell>& sorted, const Cell& I) {
  const Rat& lo = I.bound(0).lo.value;
  const Rat& hi = I.bound(0).hi.value;
  auto it = std::lower_bound(
      sorted.begin(), sorted.end(), lo,
      [](const Cell& c, const Rat& v) { return c.bound(0).lo.value < v; });
  if (it != sorted.end() && it->bound(0).lo.value <= hi) return false;
  if (it != sorted.begin()) {
    auto prev = std::prev(it);
    if (prev->bound(0).hi.value >= lo) return false;
  }
  return true;
}

// Domain window plus clipped, sorted interior breakpoints on a copy of
// the descriptor; exact kinds instead restrict their terms to the window.
IntegralResult integrate_window(const IntegrandDescriptor& f,
                                const Cell& window, const Rat& tol) {
  if (!f.oracle_kind()) {
    SimpleFunction s = f.resolve_simple();
    Vec total(static_cast<std::size_t>(s.vdim()), Rat(0));
    for (const auto& term : s.terms()) {
      Rat w = intersect(term.cell, window).volume();
      if (w == 0) continue;
      for (std::size_t d = 0; d < total.size(); ++d) total[d] += term.y[d] * w;
    }
    return IntegralResult{total, Rat(0), 0};
  }
  const Rat& lo = window.bound(0).lo.value;
  const Rat& hi = window.bound(0).hi.value;
  IntegrandDescriptor g = f;
  g.domain = window;
  std::vector<Rat> bps;
  for (const Rat& q : f.breakpoints)
    if (q > lo && q < hi) bps.push_back(q);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  g.breakpoints = std::move(bps);
  return integrate(g, Measure::length(), tol);
}

Rat eval_slack(const FunctionProbe& F) {
  if (F.exact_values()) return Rat(0);
  return Rat(Int(1), pow10(F.effective_digits()));
}

std::vector<Rat> merged_breakpoints(const std::vector<Rat>& a,
                                    const std::vector<Rat>& b) {
  std::vector<Rat> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rat> poly_mul(const std::vector<Rat>& p, const std::vector<Rat>& q) {
  std::vector<Rat> out(p.size() + q.size() - 1, Rat(0));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return out;
}

Rat poly_integral_over(const std::vector<Rat>& p, const Rat& a, const Rat& b) {
  Rat total(0);
  Rat pa = a;
  Rat pb = b;
  for (std::size_t k = 0; k < p.size(); ++k) {
    total += p[k] * (pb - pa) / Rat(static_cast<int>(k) + 1);
    pa *= a;
    pb *= b;
  }
  return total;
}

}  // namespace

Cell expand(const Cell& I, const Cell& X) {
  require_closed_ambient(X, "expand");
  if (I.empty()) return I;
  if (I.dims() != 1)
    fail(ErrorCode::DimensionMismatch, "expand works on 1-D cells");
  Rat v = cell_length(I);
  Rat lo = I.bound(0).lo.value - 2 * v;
  Rat hi = I.bound(0).hi.value + 2 * v;
  return intersect(Cell::closed_interval(lo, hi), X);
}

VitaliFamily VitaliFamily::dyadic(Cell ambient) {
  require_closed_ambient(ambient, "VitaliFamily::dyadic");
  Rat a = ambient.bound(0).lo.value;
  Rat w = cell_length(ambient);
  VitaliFamily fam;
  fam.ambient = ambient;
  fam.rule = [a, w](const Rat& x, const Rat& scale) -> Cell {
    if (!(scale > 0))
      fail(ErrorCode::BadInput, "dyadic rule needs a positive scale");
    unsigned m = 0;
    Rat len = w;
    while (!(len < scale)) {
      ++m;
      len /= 2;
      if (m > 4000)
        fail(ErrorCode::BadInput, "dyadic rule scale is out of range");
    }
    Int k = floor_to_int((x - a) / len);
    Int top = pow2(m) - 1;
    if (k < 0) k = 0;
    if (k > top) k = top;
    Rat lo = a + Rat(k) * len;
    return Cell::closed_interval(lo, lo + len);
  };
  return fam;
}

SparseSelection vitali_select(const VitaliFamily& family,
                              const std::vector<Rat>& samples, int budget) {
  require_closed_ambient(family.ambient, "vitali_select");
  if (!family.rule) fail(ErrorCode::BadInput, "vitali_select needs a rule");
  if (budget < 1) fail(ErrorCode::BadInput, "budget must be at least 1");
  if (samples.empty()) fail(ErrorCode::BadInput, "no sample points given");

  std::vector<Rat> pts = samples;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const Rat& x : pts) {
    if (!family.ambient.contains1(x))
      fail(ErrorCode::BadInput,
           "sample " + format_rat(x) + " lies outside the ambient");
    if (family.membership && !family.membership(x))
      fail(ErrorCode::BadInput,
           "sample " + format_rat(x) + " fails the membership predicate");
  }

  Rat W = cell_length(family.ambient);
  SparseSelection sel;
  sel.ambient = family.ambient;
  std::vector<bool> covered(pts.size(), false);
  std::vector<Cell> chosen_sorted;  // by left endpoint, for disjointness

  auto candidate_for = [&](const Rat& x) -> Cell {
    Rat scale = W;  // proper subcells only: v(I) < v(X)
    for (int t = 0; t <= kScaleDescentCap; ++t) {
      Cell I = family.rule(x, scale);
      if (!closed_nonempty_1d(I) || !(cell_length(I) > 0) ||
          !(cell_length(I) < scale) || !I.contains1(x) ||
          !inside_1d(I, family.ambient))
        fail(ErrorCode::RuleViolation,
             "rule returned an invalid cell for point " + format_rat(x) +
                 " at scale " + format_rat(scale));
      if (disjoint_from_sorted(chosen_sorted, I)) return I;
      scale /= 2;
    }
    fail(ErrorCode::RuleViolation,
         "rule produced no disjoint admissible cell above the scale floor "
         "for point " +
             format_rat(x));
  };

  while (true) {
    bool any_uncovered = false;
    Cell best;
    Rat sup(0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (covered[i]) continue;
      any_uncovered = true;
      Cell I = candidate_for(pts[i]);
      Rat v = cell_length(I);
      if (v > sup) sup = v;
      if (best.empty()) {
        best = I;
        continue;
      }
      Rat bv = cell_length(best);
      if (v > bv ||
          (v == bv && (I.bound(0).lo.value < best.bound(0).lo.value)))
        best = I;
    }
    if (!any_uncovered) {
      sel.status = SelectionStatus::kFiniteCover;
      break;
    }
    sel.sup_values.push_back(sup);
    sel.cells.push_back(best);
    auto pos = std::lower_bound(chosen_sorted.begin(), chosen_sorted.end(),
                                best.bound(0).lo.value,
                                [](const Cell& c, const Rat& v) {
                                  return c.bound(0).lo.value < v;
                                });
    chosen_sorted.insert(pos, best);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!covered[i] && best.contains1(pts[i])) covered[i] = true;
    if (static_cast<int>(sel.cells.size()) == budget) {
      bool left = false;
      for (bool c : covered)
        if (!c) left = true;
      sel.status = left ? SelectionStatus::kBudgetExhausted
                        : SelectionStatus::kFiniteCover;
      break;
    }
  }
  return sel;
}

void verify_selection(const SparseSelection& sel,
                      const std::vector<Rat>& samples) {
  require_closed_ambient(sel.ambient, "verify_selection");
  if (sel.sup_values.size() != sel.cells.size())
    fail(ErrorCode::BadInput, "selection log sizes disagree");

  Rat total(0);
  for (std::size_t j = 0; j < sel.cells.size(); ++j) {
    const Cell& I = sel.cells[j];
    if (!closed_nonempty_1d(I) || !(cell_length(I) > 0))
      fail(ErrorCode::RuleViolation,
           "cell " + std::to_string(j) + " is not a closed interval of "
                                         "positive length");
    if (!inside_1d(I, sel.ambient))
      fail(ErrorCode::ContainmentViolation,
           "cell " + std::to_string(j) + " leaves the ambient");
    if (!(sel.sup_values[j] < 2 * cell_length(I)))
      fail(ErrorCode::RuleViolation,
           "near-sup inequality fails at cell " + std::to_string(j));
    bool meets = false;
    for (const Rat& x : samples)
      if (I.contains1(x)) {
        meets = true;
        break;
      }
    if (!meets)
      fail(ErrorCode::RuleViolation,
           "cell " + std::to_string(j) + " meets no sample point");
    total += cell_length(I);
  }

  std::vector<Cell> by_lo = sel.cells;
  std::sort(by_lo.begin(), by_lo.end(), [](const Cell& a, const Cell& b) {
    return a.bound(0).lo.value < b.bound(0).lo.value;
  });
  for (std::size_t j = 1; j < by_lo.size(); ++j)
    if (by_lo[j - 1].bound(0).hi.value >= by_lo[j].bound(0).lo.value)
      fail(ErrorCode::DisjointnessViolation, "selected cells intersect");

  if (total > cell_length(sel.ambient))
    fail(ErrorCode::ContainmentViolation,
         "total selected length exceeds the ambient");

  if (sel.status == SelectionStatus::kFiniteCover) {
    for (const Rat& x : samples) {
      bool in = false;
      for (const Cell& I : sel.cells)
        if (I.contains1(x)) {
          in = true;
          break;
        }
      if (!in)
        fail(ErrorCode::ContainmentViolation,
             "finite-cover status but sample " + format_rat(x) +
                 " is uncovered");
    }
  }
}

bool interlaced_check(const SparseSelection& sel,
                      const std::vector<Rat>& samples, int n) {
  if (n < 0 || n > static_cast<int>(sel.cells.size()))
    fail(ErrorCode::BadInput, "prefix length out of range");
  for (const Rat& x : samples) {
    bool hit = false;
    for (int j = 0; j < n && !hit; ++j)
      if (sel.cells[static_cast<std::size_t>(j)].contains1(x)) hit = true;
    for (std::size_t j = static_cast<std::size_t>(n);
         j < sel.cells.size() && !hit; ++j)
      if (expand(sel.cells[j], sel.ambient).contains1(x)) hit = true;
    if (!hit) return false;
  }
  return true;
}

unsigned FunctionProbe::effective_digits() const {
  return digits != 0 ? digits : default_decimal_digits();
}

bool FunctionProbe::exact_values() const { return value.exact(); }

Rat FunctionProbe::eval(const Rat& x) const {
  for (const auto& [where, y] : special_values)
    if (where == x) return y;
  if (value.exact()) return value.eval_exact({x});
  if (fast_eval) return fast_eval(x, effective_digits());
  return value.eval_dec({x}, effective_digits());
}

DiniQuartet dini(const FunctionProbe& f, const Rat& x,
                 const std::vector<Rat>& schedule) {
  if (f.value.arity() > 1)
    fail(ErrorCode::BadInput, "dini needs a single-variable probe");
  if (schedule.empty()) fail(ErrorCode::BadInput, "empty step schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0))
      fail(ErrorCode::BadInput, "steps must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      fail(ErrorCode::BadInput, "steps must strictly decrease");
  }

  DiniQuartet q;
  q.schedule = schedule;
  Rat f0 = f.eval(x);
  for (const Rat& h : schedule) {
    q.right_quotients.push_back((f.eval(x + h) - f0) / h);
    q.left_quotients.push_back((f.eval(x - h) - f0) / -h);
  }
  q.right_upper = *std::max_element(q.right_quotients.begin(),
                                    q.right_quotients.end());
  q.right_lower = *std::min_element(q.right_quotients.begin(),
                                    q.right_quotients.end());
  q.left_upper =
      *std::max_element(q.left_quotients.begin(), q.left_quotients.end());
  q.left_lower =
      *std::min_element(q.left_quotients.begin(), q.left_quotients.end());
  return q;
}

IntegralResult indefinite_integral(const IntegrandDescriptor& f,
                                   const Rat& a, const Rat& x,
                                   const Rat& tol) {
  if (x == a) {
    return IntegralResult{Vec(static_cast<std::size_t>(f.vdim()), Rat(0)),
                          Rat(0), 0};
  }
  Rat lo = std::min(a, x);
  Rat hi = std::max(a, x);
  IntegralResult r = integrate_window(f, Cell::half_open(lo, hi), tol);
  if (x < a)
    for (Rat& v : r.value) v = -v;
  return r;
}

NewtonReport newton_check(const FunctionProbe& F, const Rat& a, const Rat& b,
                          const Rat& tol) {
  if (!(a < b)) fail(ErrorCode::BadInput, "newton_check needs a < b");
  if (F.value.arity() > 1)
    fail(ErrorCode::BadInput, "newton_check needs a single-variable probe");
  if (!F.lipschitz)
    fail(ErrorCode::BadInput,
         "newton_check needs a declared Lipschitz constant");
  if (!F.derivative)
    fail(ErrorCode::BadInput, "newton_check needs a derivative descriptor");
  if (F.derivative->vdim() != 1)
    fail(ErrorCode::BadInput, "derivative descriptor must be scalar");
  const Rat& M = *F.lipschitz;
  if (M < 0) fail(ErrorCode::BadInput, "Lipschitz constant must be >= 0");

  // Difference quotients on a uniform grid must respect the declared
  // constant, up to the certified evaluation slack.
  Rat slack = eval_slack(F);
  const int kGrid = 64;
  Rat step = (b - a) / kGrid;
  Rat prev = F.eval(a);
  Rat first = prev;
  Rat last = prev;
  for (int i = 1; i <= kGrid; ++i) {
    Rat p = a + step * i;
    Rat cur = F.eval(p);
    if (abs_rat(cur - prev) > M * step + 2 * slack)
      fail(ErrorCode::LipschitzViolation,
           "difference quotient near " + format_rat(p) +
               " exceeds the declared constant " + format_rat(M));
    prev = cur;
    if (i == kGrid) last = cur;
  }

  NewtonReport rep;
  rep.increment = last - first;
  IntegrandDescriptor deriv = *F.derivative;
  deriv.breakpoints =
      merged_breakpoints(deriv.breakpoints, F.derivative_null_grid);
  rep.integral = integrate_window(deriv, Cell::half_open(a, b), tol);
  rep.residual = abs_rat(rep.increment - rep.integral.value[0]);
  rep.allowance = tol + rep.integral.error_bound + 2 * slack;
  rep.ok = rep.residual <= rep.allowance;
  return rep;
}

AbsContinuityReport abs_continuity_probe(
    const FunctionProbe& F, const Rat& eps,
    const std::function<IntervalSystem(int)>& systems, int rounds) {
  if (!(eps > 0)) fail(ErrorCode::BadInput, "threshold must be positive");
  if (rounds < 1) fail(ErrorCode::BadInput, "need at least one round");
  if (!systems) fail(ErrorCode::BadInput, "no system generator given");
  if (F.value.arity() > 1)
    fail(ErrorCode::BadInput,
         "abs_continuity_probe needs a single-variable probe");

  Rat term_slack = 2 * eval_slack(F);
  Int grid = pow10(kVariationGridDigits);
  Rat grid_r(grid);

  AbsContinuityReport rep;
  std::optional<Rat> prev_len;
  Rat first_len(0);

  for (int r = 0; r < rounds; ++r) {
    IntervalSystem sys = systems(r);
    if (sys.count < 0 || !sys.cell)
      fail(ErrorCode::GeneratorInvalid,
           "round " + std::to_string(r) + " produced no interval system");

    std::vector<Cell> materialized;
    if (!sys.sorted) {
      if (sys.count > kUnsortedSystemCap)
        fail(ErrorCode::BadInput,
             "unsorted system too large to materialize at round " +
                 std::to_string(r));
      materialized.reserve(static_cast<std::size_t>(sys.count));
      for (std::int64_t i = 0; i < sys.count; ++i)
        materialized.push_back(sys.cell(i));
      std::sort(materialized.begin(), materialized.end(), cell_less);
    }
    auto nth = [&](std::int64_t i) {
      return sys.sorted ? sys.cell(i)
                        : materialized[static_cast<std::size_t>(i)];
    };

    Rat total_len(0);
    Int units(0);
    std::optional<Cell> prev_cell;
    for (std::int64_t i = 0; i < sys.count; ++i) {
      Cell c = nth(i);
      if (c.empty() || c.dims() != 1)
        fail(ErrorCode::GeneratorInvalid,
             "round " + std::to_string(r) + " produced an empty or "
                                            "non-interval cell");
      if (prev_cell) {
        const Interval& p = prev_cell->bound(0);
        const Interval& q = c.bound(0);
        bool ordered = p.lo.value <= q.lo.value;
        bool gap = q.lo.value > p.hi.value ||
                   (q.lo.value == p.hi.value &&
                    !(q.lo.closed && p.hi.closed));
        if (!ordered || !gap)
          fail(ErrorCode::GeneratorInvalid,
               "round " + std::to_string(r) +
                   " produced overlapping or unordered intervals");
      }
      prev_cell = c;
      total_len += cell_length(c);
      Rat va = F.eval(c.bound(0).lo.value);
      Rat vb = F.eval(c.bound(0).hi.value);
      Rat d = abs_rat(vb - va) - term_slack;
      if (d > 0) units += floor_to_int(d * grid_r);
    }
    Rat variation(units, grid);

    if (prev_len && total_len > *prev_len)
      fail(ErrorCode::GeneratorInvalid,
           "system total length grew at round " + std::to_string(r));
    prev_len = total_len;
    if (r == 0) first_len = total_len;
    rep.rounds_run = r + 1;

    if (F.lipschitz) {
      if (variation > *F.lipschitz * total_len)
        fail(ErrorCode::LipschitzViolation,
             "variation exceeds the declared constant times the system "
             "length at round " +
                 std::to_string(r));
    } else if (variation >= eps) {
      rep.outcome = AbsContinuityOutcome::kViolation;
      rep.witness_round = r;
      rep.witness_total_length = total_len;
      rep.witness_variation = variation;
      return rep;
    }
  }

  if (F.lipschitz) {
    rep.outcome = AbsContinuityOutcome::kProvenModulus;
    rep.delta = *F.lipschitz == 0 ? Rat(1) : eps / *F.lipschitz;
  } else {
    rep.outcome = AbsContinuityOutcome::kEstimatedModulus;
    rep.delta = first_len;
  }
  return rep;
}

FunctionProbe oscillation_probe(unsigned digits) {
  FunctionProbe p;
  p.value = Expr::parse("(x^2)*sin(1/(x^2))");
  p.special_values.emplace_back(Rat(0), Rat(0));
  p.digits = digits;
  p.fast_eval = [](const Rat& x, unsigned d) -> Rat {
    if (x == 0) return Rat(0);
    Rat x2 = x * x;
    // |x^2 sin(1/x^2) - x^2 s| = x^2 |sin - s|; pad digits to absorb the
    // x^2 factor outside the unit interval.
    unsigned pad = 2;
    Rat mag = abs_rat(x2);
    while (mag > 1) {
      mag /= 10;
      ++pad;
    }
    Rat s = sin_dec(Rat(1) / x2, d + pad);
    return x2 * s;
  };
  return p;
}

namespace {

// Dyadic-grid abscissa (units of 2^-40) of the extremum of sin(1/x^2)
// with phase (k + 1/2) pi: floor(2^40 / sqrt(phi_k)) for a fixed 10-digit
// rational upper approximation of pi. The phase offset it introduces
// stays far below one oscillation for every index this module emits.
// floor(sqrt(floor(y))) = floor(sqrt(y)), so the quotient can be floored
// before the root; machine words suffice once it fits.
std::int64_t extremum_units(std::int64_t k) {
  static const Int kPiScaled("31415926536");  // pi * 10^10, rounded up
  static const Int kNum = (2 * pow10(10)) << 80;
  Int n = Int(2 * k + 1) * kPiScaled;
  Int big = floor_div(kNum, n);
  if (big < Int(std::int64_t{1} << 62)) {
    auto A = static_cast<std::uint64_t>(big);
    auto u = static_cast<std::uint64_t>(
        __builtin_sqrt(static_cast<double>(A)));
    while (u > 0 && u * u > A) --u;
    while ((u + 1) * (u + 1) <= A) ++u;
    return static_cast<std::int64_t>(u);
  }
  return static_cast<std::int64_t>(isqrt_floor(big));
}

struct ExtremaTable {
  std::mutex mu;
  // round -> units of extrema first-1 .. first+count-1 for that round
  std::vector<std::shared_ptr<const std::vector<std::int64_t>>> per_round;
};

}  // namespace

std::function<IntervalSystem(int)> oscillation_witness(
    std::int64_t first_index, std::int64_t count) {
  if (first_index < 1 || count < 1)
    fail(ErrorCode::BadInput,
         "oscillation_witness needs positive index and count");
  auto table = std::make_shared<ExtremaTable>();
  return [first_index, count, table](int round) -> IntervalSystem {
    if (round < 0) fail(ErrorCode::BadInput, "negative round");
    std::int64_t scale = 1;
    for (int r = 0; r < round; ++r) scale *= 4;
    std::int64_t first = first_index * scale;
    std::int64_t n = count * scale;

    std::shared_ptr<const std::vector<std::int64_t>> units;
    {
      std::lock_guard<std::mutex> lock(table->mu);
      if (table->per_round.size() <= static_cast<std::size_t>(round))
        table->per_round.resize(static_cast<std::size_t>(round) + 1);
      if (!table->per_round[static_cast<std::size_t>(round)]) {
        auto vals = std::make_shared<std::vector<std::int64_t>>();
        vals->reserve(static_cast<std::size_t>(n) + 1);
        for (std::int64_t k = first - 1; k < first + n; ++k)
          vals->push_back(extremum_units(k));
        table->per_round[static_cast<std::size_t>(round)] = vals;
      }
      units = table->per_round[static_cast<std::size_t>(round)];
    }

    IntervalSystem sys;
    sys.count = n;
    sys.sorted = true;
    sys.cell = [units, first, n](std::int64_t i) -> Cell {
      if (i < 0 || i >= n)
        fail(ErrorCode::BadInput, "interval index out of range");
      // Cell i spans extrema j and j-1 for j = first + n - 1 - i, with
      // the left endpoint nudged one grid unit inward so neighbors stay
      // strictly disjoint.
      std::int64_t j = first + n - 1 - i;
      std::int64_t lo = (*units)[static_cast<std::size_t>(j - first + 1)] + 1;
      std::int64_t hi = (*units)[static_cast<std::size_t>(j - first)];
      if (lo >= hi)
        fail(ErrorCode::GeneratorInvalid,
             "dyadic snapping collapsed an oscillation interval");
      static const Int g = pow2(40);
      return Cell::closed_interval(Rat(Int(lo), g), Rat(Int(hi), g));
    };
    return sys;
  };
}

LebesguePointReport lebesgue_point_probe(const IntegrandDescriptor& f,
                                         const Rat& p,
                                         const std::vector<Rat>& schedule,
                                         const Rat& tol) {
  if (schedule.empty()) fail(ErrorCode::BadInput, "empty width schedule");
  for (const Rat& h : schedule)
    if (h == 0) fail(ErrorCode::BadInput, "window widths must be nonzero");
  if (f.vdim() != 1)
    fail(ErrorCode::UnsupportedDescriptor,
         "lebesgue_point_probe needs a scalar integrand");
  if (f.kind == IntegrandDescriptor::Kind::kMonotone)
    fail(ErrorCode::UnsupportedDescriptor,
         "monotone oracles are not supported; declare Lipschitz or modulus "
         "data");
  if (!(tol > 0)) fail(ErrorCode::BadInput, "tolerance must be positive");

  Rat c = f.eval_point(p)[0];
  Rat c_err = f.exact_eval()
                  ? Rat(0)
                  : Rat(Int(1), pow10(default_decimal_digits()));

  LebesguePointReport rep;
  for (const Rat& h : schedule) {
    Rat width = abs_rat(h);
    Cell window = h > 0 ? Cell::half_open(p, p + h)
                        : Cell::half_open(p + h, p);
    Rat value;
    Rat err;
    if (!f.oracle_kind()) {
      SimpleFunction s = f.resolve_simple();
      Rat total(0);
      Rat covered(0);
      for (const auto& term : s.terms()) {
        Rat w = intersect(term.cell, window).volume();
        if (w == 0) continue;
        total += abs_rat(term.y[0] - c) * w;
        covered += w;
      }
      total += abs_rat(c) * (width - covered);
      value = total;
      err = Rat(0);
    } else {
      std::string src =
          "abs((" + f.oracle->source() + ")-(" + format_rat(c) + "))";
      IntegrandDescriptor d = f;
      d.oracle = Expr::parse(src);
      IntegralResult res = integrate_window(d, window, tol * width / 2);
      value = res.value[0];
      err = res.error_bound + c_err * width;
    }
    rep.h_values.push_back(h);
    rep.averages.push_back(value / width);
    rep.error_bounds.push_back(err / width);
  }
  rep.converged = rep.averages.back() + rep.error_bounds.back() <= tol;
  return rep;
}

PartsReport parts_check(const FunctionProbe& F, const FunctionProbe& G,
                        const IntegrandDescriptor& f,
                        const IntegrandDescriptor& g, const Rat& a,
                        const Rat& b, const Rat& tol) {
  if (!(a < b)) fail(ErrorCode::BadInput, "parts_check needs a < b");
  if (tol < 0) fail(ErrorCode::BadInput, "tolerance must be >= 0");
  if (F.value.arity() > 1 || G.value.arity() > 1)
    fail(ErrorCode::BadInput, "parts_check needs single-variable probes");
  if (!f.oracle_kind() || !g.oracle_kind())
    fail(ErrorCode::UnsupportedDescriptor,
         "parts_check needs pointwise oracle integrands");

  PartsReport rep;

  // Polynomial closed-form path: everything exact, no quadrature.
  auto pF = F.special_values.empty() ? F.value.polynomial_on(a, b)
                                     : std::nullopt;
  auto pG = G.special_values.empty() ? G.value.polynomial_on(a, b)
                                     : std::nullopt;
  auto pf = f.oracle->exact() ? f.oracle->polynomial_on(a, b) : std::nullopt;
  auto pg = g.oracle->exact() ? g.oracle->polynomial_on(a, b) : std::nullopt;
  if (pF && pG && pf && pg) {
    Rat left = poly_integral_over(poly_mul(*pf, *pG), a, b);
    Rat right = poly_integral_over(poly_mul(*pF, *pg), a, b);
    rep.boundary = F.eval(b) * G.eval(b) - F.eval(a) * G.eval(a);
    rep.left = IntegralResult{Vec{left}, Rat(0), 0};
    rep.right = IntegralResult{Vec{right}, Rat(0), 0};
    rep.residual = abs_rat(left + right - rep.boundary);
    rep.allowance = tol;
    rep.ok = rep.residual <= rep.allowance;
    rep.exact = true;
    return rep;
  }

  if (f.kind != IntegrandDescriptor::Kind::kLipschitz ||
      g.kind != IntegrandDescriptor::Kind::kLipschitz)
    fail(ErrorCode::UnsupportedDescriptor,
         "parts_check needs Lipschitz integrands outside the polynomial "
         "path");
  if (!F.lipschitz || !G.lipschitz)
    fail(ErrorCode::BadInput,
         "parts_check needs declared Lipschitz constants on both probes");

  Rat w = b - a;
  Rat eF = eval_slack(F);
  Rat eG = eval_slack(G);
  Rat ef = f.exact_eval() ? Rat(0)
                          : Rat(Int(1), pow10(default_decimal_digits()));
  Rat eg = g.exact_eval() ? Rat(0)
                          : Rat(Int(1), pow10(default_decimal_digits()));
  // Reach bounds: |u| on [a, b] is at most |u(a)| plus the Lipschitz
  // travel, padded by the evaluation slack.
  Rat Fsup = abs_rat(F.eval(a)) + eF + *F.lipschitz * w;
  Rat Gsup = abs_rat(G.eval(a)) + eG + *G.lipschitz * w;
  Rat fsup = abs_rat(f.eval_oracle(a)) + ef + f.lipschitz_bound * w;
  Rat gsup = abs_rat(g.eval_oracle(a)) + eg + g.lipschitz_bound * w;

  Expr left_expr = Expr::parse("(" + f.oracle->source() + ")*(" +
                               G.value.source() + ")");
  Expr right_expr = Expr::parse("(" + F.value.source() + ")*(" +
                                g.oracle->source() + ")");
  Rat left_bound = f.lipschitz_bound * Gsup + *G.lipschitz * fsup;
  Rat right_bound = *F.lipschitz * gsup + g.lipschitz_bound * Fsup;
  Cell window = Cell::half_open(a, b);
  IntegrandDescriptor dl = IntegrandDescriptor::lipschitz(
      left_expr, left_bound, window,
      merged_breakpoints(f.breakpoints, {}));
  IntegrandDescriptor dr = IntegrandDescriptor::lipschitz(
      right_expr, right_bound, window,
      merged_breakpoints(g.breakpoints, {}));
  rep.left = integrate_window(dl, window, tol / 2);
  rep.right = integrate_window(dr, window, tol / 2);

  rep.boundary = F.eval(b) * G.eval(b) - F.eval(a) * G.eval(a);
  Rat boundary_slack = 2 * (Fsup * eG + Gsup * eF + eF * eG);
  rep.residual =
      abs_rat(rep.left.value[0] + rep.right.value[0] - rep.boundary);
  rep.allowance = tol + rep.left.error_bound + rep.right.error_bound +
                  boundary_slack;
  rep.ok = rep.residual <= rep.allowance;
  return rep;
}

}  // namespace prering
