#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "prering/cell.hpp"
#include "prering/expr.hpp"
#include "prering/integrator.hpp"
#include "prering/rational.hpp"

namespace prering {

// Grows a closed interval by twice its length on each side, clipped to
// the ambient interval: [c, d] -> [c - 2v(I), d + 2v(I)] meet X, so
// v(expand(I, X)) <= 5 v(I). The empty cell maps to itself.
Cell expand(const Cell& I, const Cell& X);

// Covering family on a closed ambient interval X: the rule produces, for
// a query point and a positive scale, a closed cell that contains the
// point, has positive length below the scale, and lies inside X. The
// optional membership predicate restricts which sample points count as
// members of the covered set.
struct VitaliFamily {
  Cell ambient;
  std::function<Cell(const Rat&, const Rat&)> rule;  // (point, scale)
  std::function<bool(const Rat&)> membership;        // optional

  // Closed dyadic subinterval of the ambient of the coarsest level whose
  // length is below the scale; the right edge clamps inward so the top
  // endpoint stays covered.
  static VitaliFamily dyadic(
      Cell ambient = Cell::closed_interval(Rat(0), Rat(1)));
};

enum class SelectionStatus { kFiniteCover, kBudgetExhausted };

// Greedy selection log: cells in choice order, the finite-pool sup
// recorded before each choice, and how the loop ended.
struct SparseSelection {
  Cell ambient;
  std::vector<Cell> cells;
  std::vector<Rat> sup_values;  // sup_values[j] is the pool sup for cells[j]
  SelectionStatus status = SelectionStatus::kFiniteCover;
};

// Greedy disjoint selection: each round builds one admissible candidate
// per uncovered sample by descending geometric scales until the rule's
// cell is disjoint from everything chosen, then takes the candidate of
// maximal length (ties: leftmost, then shortest). Stops when every
// sample is covered or the budget is reached. The recorded pool sup
// makes the near-sup inequality sup < 2 v(chosen) exact by construction;
// verify_selection replays it from the log alone.
SparseSelection vitali_select(const VitaliFamily& family,
                              const std::vector<Rat>& samples, int budget);

// Replays a selection log: cells closed, inside the ambient, pairwise
// disjoint, each containing a sample; sup_values[j] < 2 v(cells[j]);
// total length at most the ambient's; finite-cover status implies every
// sample is covered. Throws the matching verification error.
void verify_selection(const SparseSelection& sel,
                      const std::vector<Rat>& samples);

// True iff every sample lies in the union of the first n chosen cells
// with the expansions of the remaining chosen cells.
bool interlaced_check(const SparseSelection& sel,
                      const std::vector<Rat>& samples, int n);

// Pointwise function probe: an expression value oracle with exact point
// overrides, optional derivative data, and declared regularity. Decimal
// evaluations carry certified absolute error 10^-digits.
struct FunctionProbe {
  Expr value;
  std::vector<std::pair<Rat, Rat>> special_values;  // exact overrides
  std::optional<IntegrandDescriptor> derivative;
  std::vector<Rat> derivative_null_grid;  // points the derivative skips
  std::optional<Rat> lipschitz;           // declared constant
  unsigned digits = 0;                    // 0 = default decimal digits
  // Optional evaluation shortcut for hot loops; must meet the same
  // certified-error contract as decimal evaluation at the given digits.
  std::function<Rat(const Rat&, unsigned)> fast_eval;

  unsigned effective_digits() const;
  // True when eval is exact at every rational (no decimal rounding).
  bool exact_values() const;
  // Override, else exact expression value, else fast_eval or decimal.
  Rat eval(const Rat& x) const;
};

// Difference-quotient estimates over a decreasing schedule of positive
// steps. The four bounds are sup/inf of the recorded quotients; they are
// estimates attached to the schedule, not claimed limits.
struct DiniQuartet {
  std::vector<Rat> schedule;
  std::vector<Rat> right_quotients;  // (f(x+h) - f(x)) / h
  std::vector<Rat> left_quotients;   // (f(x-h) - f(x)) / (-h)
  Rat right_upper;
  Rat right_lower;
  Rat left_upper;
  Rat left_lower;
};

DiniQuartet dini(const FunctionProbe& f, const Rat& x,
                 const std::vector<Rat>& schedule);

// Integral of f over the interval from a to x (negated when x < a) with
// the integrand's breakpoints clipped to the window; exact kinds are
// restricted exactly.
IntegralResult indefinite_integral(const IntegrandDescriptor& f,
                                   const Rat& a, const Rat& x,
                                   const Rat& tol);

struct NewtonReport {
  Rat increment;           // F(b) - F(a)
  IntegralResult integral; // certified integral of the derivative
  Rat residual;            // |increment - integral value|
  Rat allowance;           // tol + integral error + evaluation slack
  bool ok = false;
};

// Checks F(b) - F(a) against the integral of the declared derivative
// descriptor over [a, b), splitting at the declared null grid so the
// quadrature never evaluates the derivative there. Samples difference
// quotients against the declared Lipschitz constant first and reports
// LipschitzViolation when one exceeds it.
NewtonReport newton_check(const FunctionProbe& F, const Rat& a, const Rat& b,
                          const Rat& tol);

// Finite disjoint interval system, streamed by index. `sorted` promises
// cells arrive in increasing order (verified incrementally); unsorted
// systems are materialized and sorted below a size cap.
struct IntervalSystem {
  std::int64_t count = 0;
  std::function<Cell(std::int64_t)> cell;
  bool sorted = false;
};

enum class AbsContinuityOutcome {
  kProvenModulus,     // declared Lipschitz constant certifies delta
  kEstimatedModulus,  // every tested system stayed below eps
  kViolation,         // witness system found
};

struct AbsContinuityReport {
  AbsContinuityOutcome outcome = AbsContinuityOutcome::kEstimatedModulus;
  Rat delta;           // modulus outcomes: the delta that withstood testing
  int rounds_run = 0;
  int witness_round = -1;       // violation outcome
  Rat witness_total_length;     // exact total length of the witness system
  Rat witness_variation;        // certified lower bound on sum |F(b)-F(a)|
};

// Tests absolute continuity of F at threshold eps against systems of
// shrinking total length. A declared Lipschitz constant M proves
// delta = eps / M (rounds then only cross-check, and a variation sum
// above M times a system's length reports LipschitzViolation); otherwise
// the first system whose certified variation lower bound reaches eps is
// returned as a violation witness. Overlapping or growing systems report
// GeneratorInvalid.
AbsContinuityReport abs_continuity_probe(
    const FunctionProbe& F, const Rat& eps,
    const std::function<IntervalSystem(int)>& systems, int rounds);

// x^2 sin(1/x^2) with value 0 at 0: the standard pointwise-differentiable
// function that is not absolutely continuous. Carries a native evaluation
// shortcut meeting the probe's certified-error contract.
FunctionProbe oscillation_probe(unsigned digits = 11);

// Disjoint closed systems straddling consecutive extrema of
// x^2 sin(1/x^2): system cell i spans the dyadic-snapped extremum
// abscissae with index first_index + count - 1 - i, so cells ascend.
// Round r scales both numbers by 4^r: total length halves per round
// while the variation sum stays near (2/pi) log(1 + count/first_index).
std::function<IntervalSystem(int)> oscillation_witness(
    std::int64_t first_index, std::int64_t count);

struct LebesguePointReport {
  std::vector<Rat> h_values;
  std::vector<Rat> averages;      // (1/|h|) integral of |f - f(p)|
  std::vector<Rat> error_bounds;  // certified per-average error
  bool converged = false;         // final average + error within tol
};

// Averages of |f - f(p)| over windows from p of the scheduled widths
// (negative h approaches from the left). Exact for simple kinds;
// Lipschitz and modulus oracles integrate the composed absolute
// difference with certified error. Monotone oracles are unsupported.
LebesguePointReport lebesgue_point_probe(const IntegrandDescriptor& f,
                                         const Rat& p,
                                         const std::vector<Rat>& schedule,
                                         const Rat& tol);

struct PartsReport {
  Rat boundary;         // F(b) G(b) - F(a) G(a)
  IntegralResult left;  // integral of f G over [a, b)
  IntegralResult right; // integral of F g over [a, b)
  Rat residual;         // |left + right - boundary|
  Rat allowance;        // tol + integral errors + evaluation slack
  bool ok = false;
  bool exact = false;   // polynomial closed-form path, all errors zero
};

// Integration-by-parts identity check. Polynomial probes with polynomial
// derivative oracles integrate in closed form and compare exactly;
// otherwise both products integrate as Lipschitz oracles with bounds
// assembled from the declared constants and evaluation reach.
PartsReport parts_check(const FunctionProbe& F, const FunctionProbe& G,
                        const IntegrandDescriptor& f,
                        const IntegrandDescriptor& g, const Rat& a,
                        const Rat& b, const Rat& tol);

}  // namespace prering
