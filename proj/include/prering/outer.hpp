#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prering/measure.hpp"
#include "prering/simple_set.hpp"

namespace prering {

// A countable cover with a declared bound on the total measure of its
// cells. Cells come from a restartable generator (a pure closure of the
// index), so prefixes of any length can be materialized on demand and
// nothing is stored eagerly.
class CoverCertificate {
 public:
  using Generator = std::function<Cell(std::int64_t)>;

  static constexpr std::int64_t kDefaultPrefix = 10000;

  // finite_size < 0 declares a genuinely countable cover.
  static CoverCertificate from_generator(Generator gen, Rat bound,
                                         std::string generator_name = "",
                                         std::int64_t finite_size = -1);
  static CoverCertificate from_cells(std::vector<Cell> cells, Rat bound,
                                     std::string generator_name = "");

  const Rat& bound() const { return bound_; }
  std::int64_t finite_size() const { return finite_size_; }
  const std::string& generator_name() const { return name_; }

  Cell cell(std::int64_t n) const;
  std::vector<Cell> prefix(std::int64_t n) const;

  // Checks sum_{i<n} v(cell_i) <= bound. Cells whose exact measure has a
  // denominator too wide for cheap exact accumulation are rounded upward
  // onto a 10^-40 grid, so the check stays sound and fast even when cell
  // measures shrink with astronomical denominators. Throws
  // GeneratorInvalid when the bound is exceeded.
  void verify_prefix_sums(const Measure& v,
                          std::int64_t n = kDefaultPrefix) const;

  // True when x lies in one of the first n cells.
  bool covers_point(const Rat& x, std::int64_t n = kDefaultPrefix) const;

 private:
  Generator gen_;
  Rat bound_;
  std::string name_;
  std::int64_t finite_size_ = -1;
};

// Cover of the union of the two targets; the bound adds.
CoverCertificate merge_covers(const CoverCertificate& a,
                              const CoverCertificate& b);

// Level-k stage of the middle-thirds construction: 2^k closed intervals
// of length 3^-k each, presented left to right by a lazy cell generator.
// In units of 3^-k the i-th interval is [A_i, A_i + 1] where A_i carries
// the removed-thirds address of i, so everything stays in int64 through
// level 25 and beyond.
struct CantorCover {
  int level = 0;
  std::int64_t count = 1;  // 2^level
  Rat measure;             // (2/3)^level exactly

  Cell cell(std::int64_t index) const;
  // Materializes every cell; capped at level 14 to keep canonicalization
  // affordable. Use cell()/certificate() for deeper levels.
  SimpleSet set() const;
  CoverCertificate certificate() const;
};

CantorCover cantor_cover(int k);

// Exact nesting scan in int64 units of 3^-k: every level-k interval lies
// inside its level-(k-1) parent, consecutive intervals are separated by
// at least one unit, and the count is 2^k.
bool cantor_nested_exact(int k);

// Certificate that the points enumerated by `points` form a null set:
// cell n is a closed interval of length eps * 2^-(n+2) centered at point
// n, so the total stays at eps/2 with real slack under the declared
// bound eps. finite_count < 0 means the enumeration never ends.
CoverCertificate null_certificate_countable(
    std::function<Rat(std::int64_t)> points, const Rat& eps,
    std::string name = "", std::int64_t finite_count = -1);

// Built-in point enumerations for certificates, by name. Supported:
// "rationals-unit-interval" (every rational of [0,1] exactly once).
// Throws BadInput for unknown names.
std::function<Rat(std::int64_t)> named_point_generator(
    const std::string& name);

struct Bracket {
  Rat lower;
  Rat upper;
};

// On simple sets the outer measure coincides with the measure, so the
// bracket collapses to the exact value.
Bracket outer_measure(const SimpleSet& target, const Measure& v,
                      const Rat& eps);

// A non-simple target is described by what is computable about it: covers
// give upper bounds, contained simple sets give lower bounds. The bracket
// is one-sided honest; no infimum search happens behind the caller.
struct OuterRecipe {
  std::vector<CoverCertificate> covers;  // tried in order
  std::vector<SimpleSet> inner;          // simple subsets of the target
};

// Walks the declared covers in order and stops at the first one whose
// bound comes within eps of the best lower bound. Throws
// ToleranceUnreachable when the recipe runs out of covers first.
Bracket outer_measure(const OuterRecipe& recipe, const Measure& v,
                      const Rat& eps);

// Superset of `target` in half-open canonical form with measure at most
// v(target) + eps. Half-open cells pass through unchanged; a closed right
// endpoint is pushed out by eps * 2^-(j+2). Measures without a length
// structure return the target itself.
SimpleSet approx_by_Vsigma(const SimpleSet& target, const Measure& v,
                           const Rat& eps);

// Open cover of `target` with bound strictly below v(target) + eps, by
// the same per-cell fattening. Only the length measure (1-D volume) is
// outer regular here; other kinds throw UnsupportedKind.
CoverCertificate outer_regular_cover(const SimpleSet& target, const Rat& eps,
                                     const Measure& v = Measure::length());

}  // namespace prering
