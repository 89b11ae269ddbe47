#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prering/cell.hpp"
#include "prering/expr.hpp"
#include "prering/measure.hpp"
#include "prering/rng.hpp"
#include "prering/simple_function.hpp"
#include "prering/vector_measure.hpp"

namespace prering {

// Description of an integrand together with the regularity data that
// certifies an approximation-error bound per dyadic level. Oracle kinds
// integrate a pointwise oracle over a bounded 1-D cell; the simple and
// composite kinds are exact.
//
// Declared breakpoints split the domain so the oracle only needs its
// stated regularity inside each piece; half-open pieces resolve endpoint
// ambiguity (always extend the last piece to the domain's right closure).
struct IntegrandDescriptor {
  enum class Kind {
    kMonotone,             // oracle monotone on each piece
    kLipschitz,            // |f(x)-f(y)| <= bound |x-y| on each piece
    kPiecewiseContinuous,  // |f(x)-f(y)| <= modulus(|x-y|) on each piece
    kComposite,            // u(lhs, rhs) of simple functions; exact
    kSimple,               // a simple function; exact
  };

  Kind kind = Kind::kSimple;

  // Oracle kinds.
  std::optional<Expr> oracle;
  bool increasing = true;         // monotone kind direction
  Rat lipschitz_bound = Rat(0);   // lipschitz kind
  std::optional<Expr> modulus;    // piecewise-continuous kind; nondecreasing
  std::vector<Rat> breakpoints;   // interior split points
  std::optional<Cell> domain;     // bounded 1-D cell

  // Composite kind payload.
  std::optional<BilinearOp> op;
  std::optional<SimpleFunction> lhs;
  std::optional<SimpleFunction> rhs;

  // Simple kind payload.
  std::optional<SimpleFunction> step;

  static IntegrandDescriptor monotone(Expr oracle, Cell domain,
                                      bool increasing = true,
                                      std::vector<Rat> breakpoints = {});
  static IntegrandDescriptor lipschitz(Expr oracle, Rat bound, Cell domain,
                                       std::vector<Rat> breakpoints = {});
  static IntegrandDescriptor piecewise_continuous(
      Expr oracle, Expr modulus, Cell domain,
      std::vector<Rat> breakpoints = {});
  static IntegrandDescriptor composite(BilinearOp op, SimpleFunction lhs,
                                       SimpleFunction rhs);
  static IntegrandDescriptor simple(SimpleFunction h);

  bool oracle_kind() const;
  // Value dimension: 1 for oracle kinds.
  int vdim() const;
  // True when every evaluation is exact over the rationals.
  bool exact_eval() const;
  // Oracle kinds: f at a rational point (exact when exact_eval()).
  Rat eval_oracle(const Rat& x) const;
  // Composite and simple kinds resolved to one simple function.
  SimpleFunction resolve_simple() const;
  // Pointwise value for any kind (1-dim for oracle kinds).
  Vec eval_point(const Rat& x) const;
  // Interval hull the descriptor lives on (domain, or support hull).
  void sample_range(Rat* lo, Rat* hi) const;
};

// A basic sequence: increments h_n with ||h_n|| <= M 4^-n, partial sums
// s_n = h_1 + ... + h_n converging to the integrand in seminorm.
struct BasicSequence {
  std::vector<SimpleFunction> increments;
  Rat bound;                      // the constant M
  std::vector<int> dyadic_levels; // underlying dyadic level per index

  int levels() const { return static_cast<int>(increments.size()); }
  SimpleFunction partial(int n) const;
};

struct IntegralResult {
  Vec value;
  Rat error_bound;  // = bound * 4^-levels_used / 3, the certified tail
  int levels_used = 0;
};

// Materializes the first `levels` increments of a basic sequence for f:
// dyadic lower approximations with levels re-indexed so the geometric
// bound holds; each seminorm inequality is checked exactly. Monotone
// oracles are verified on the sampled partition points. Depth is capped
// by the materialization limit (2^12 cells per level).
BasicSequence build_basic_sequence(const IntegrandDescriptor& f,
                                   const Measure& v, int levels);

// Exact integral of the raw level-`level` dyadic step approximation
// (lower sum for monotone kinds), before any re-indexing. Oracle kinds
// only.
Rat dyadic_lower_sum(const IntegrandDescriptor& f, const Measure& v,
                     int level);

// |value - integral of f| <= error_bound <= tol, deterministic. The
// returned error bound is the certified basic-sequence tail. Exact kinds
// return error_bound 0.
IntegralResult integrate(const IntegrandDescriptor& f, const Measure& v,
                         const Rat& tol);

// Trilinear integral of u(f, d mu) with the error bound scaled by
// |u| and an upper bound for |mu|.
IntegralResult trilinear_integrate(const BilinearOp& u,
                                   const IntegrandDescriptor& f,
                                   const VectorMeasure& mu, const Rat& tol);

// Falsifier report for the convergence checks: pointwise hypotheses are
// sampled at `samples` rational points, integral-level conclusions are
// verified within the certified error bounds.
struct ConvergenceReport {
  bool ok = false;
  std::vector<Vec> integrals;    // one per sequence member
  std::vector<Rat> error_bounds;
  std::vector<Rat> gaps;         // successive integral differences
  std::string detail;
};

// Verifies f_n(x) <= f_{n+1}(x) on sampled points (errors with
// MonotonicityViolation otherwise) and that the integrals are
// nondecreasing with nonincreasing gaps, within error slack.
ConvergenceReport monotone_convergence_check(
    const std::vector<IntegrandDescriptor>& fn, const Measure& v,
    int samples, const Rat& tol, Rng rng = Rng(0x5eed));

// Verifies |f_n(x)| <= g(x) on sampled points (DominationViolation
// otherwise) and that |integral f_n - integral limit| decreases within
// error slack. The pointwise limit is passed explicitly.
ConvergenceReport dominated_convergence_check(
    const std::vector<IntegrandDescriptor>& fn,
    const IntegrandDescriptor& limit, const IntegrandDescriptor& dominator,
    const Measure& v, int samples, const Rat& tol, Rng rng = Rng(0x5eed));

// Verifies liminf(x) <= f_n(x) on sampled points and that
// integral(liminf) <= min_n integral(f_n) within error slack. The liminf
// is passed explicitly as a descriptor.
ConvergenceReport fatou_check(const std::vector<IntegrandDescriptor>& fn,
                              const IntegrandDescriptor& liminf,
                              const Measure& v, int samples, const Rat& tol,
                              Rng rng = Rng(0x5eed));

// Exact commutation of sum and integral for finitely many simple
// functions.
bool series_commutation_check(const std::vector<SimpleFunction>& terms,
                              const Measure& v);

struct SummableSetResult {
  SimpleSet set;    // last partial intersection of the recipe
  Rat lower;        // certified bracket for the measure of the limit
  Rat upper;
  bool exact = false;
  int stages = 0;
};

// Measure of a summable set given as a decreasing countable-intersection
// recipe of simple sets (a single stage is exact). The bracket
// [0, v(last stage)] must close within tol, else ToleranceUnreachable.
SummableSetResult summable_set(const std::vector<SimpleSet>& recipe,
                               const Measure& v, const Rat& tol);

}  // namespace prering
