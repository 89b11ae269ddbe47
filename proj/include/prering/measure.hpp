#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prering/cell.hpp"
#include "prering/expr.hpp"
#include "prering/simple_set.hpp"

namespace prering {

enum class MeasureKind {
  kLength,
  kVolume,
  kStieltjes,
  kDirac,
  kCounting,
  kProbDistribution,
  kRestriction,
  kDirectSum,
  kTensor,
};

// Unbounded interval for the probability-distribution kind only; the core
// Cell type stays finite. nullopt endpoints mean -inf / +inf. Allowed
// shapes follow the distribution prering: [lo, hi) when hi is finite,
// [lo, +inf] otherwise.
struct ExtInterval {
  std::optional<Rat> lo;
  std::optional<Rat> hi;
};

// Positive sigma-additive measure on prering cells. Immutable; evaluation
// is pure and thread-safe. Rational kinds evaluate exactly; a Stieltjes or
// distribution integrator using sqrt/sin/cos/pi evaluates in decimal mode
// with certified per-call error <= 10^-digits.
class Measure {
 public:
  static Measure length();
  // dims = 0 accepts cells of any dimension; a positive value pins it,
  // which tensor factors require.
  static Measure volume(int dims = 0);
  // v([a,b)) = g(b) - g(a); endpoints must avoid the excluded points.
  static Measure stieltjes(Expr g, std::vector<Rat> excluded = {},
                           unsigned digits = 0);
  static Measure dirac(std::vector<Rat> x0);
  static Measure counting();
  // F nondecreasing with F(-inf) = 0 and F(+inf) = 1; cells must be of
  // the shape [a,b). Unbounded evaluation goes through ext().
  static Measure prob_distribution(Expr F, std::vector<Rat> excluded = {},
                                   unsigned digits = 0);
  // v(a) = parent(a meet ambient).
  static Measure restriction(Measure parent, SimpleSet ambient);
  // Children share the underlying space: v(a) = sum of child measures.
  static Measure direct_sum(std::vector<Measure> children);
  // v(a x b) = m1(a) * m2(b); factors need determinate dimensions.
  static Measure tensor(Measure m1, Measure m2);

  MeasureKind kind() const;

  // True when every evaluation is an exact rational.
  bool exact() const;

  // Decimal precision used by inexact integrators (0 for exact kinds).
  unsigned digits() const;

  // Required cell dimension; 0 means any.
  int expected_dims() const;

  // The integrator g (Stieltjes) or F (distribution); nullopt otherwise.
  std::optional<Expr> integrator() const;

  // Excluded endpoint set of the Stieltjes / distribution prering
  // (empty for every other kind).
  const std::vector<Rat>& excluded() const;

  Rat operator()(const Cell& a) const;
  Rat on_simple(const SimpleSet& s) const;

  // Probability-distribution evaluation on a possibly unbounded interval.
  // Errors with UnsupportedKind for every other kind.
  Rat ext(const ExtInterval& i) const;

  std::string describe() const;

  struct Impl;

 private:
  explicit Measure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct AdditivityReport {
  std::vector<Rat> partial_sums;
  Rat total;
  Rat residual;
};

// Desk-scale countable additivity: the first N cells of `decomposition`
// must be pairwise disjoint subsets of `a`; the report records partial
// sums and the residual v(a) - total.
AdditivityReport check_countable_additivity(const Measure& m, const Cell& a,
                                            const std::vector<Cell>& decomposition,
                                            int N);

// True iff v(a - h) = v(a) exactly; length/volume only (h applied to
// every axis).
bool translate_invariance_check(const Measure& m, const Cell& a, const Rat& h);

}  // namespace prering
