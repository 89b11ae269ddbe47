#pragma once

#include <vector>

#include "prering/cell.hpp"

namespace prering {

// Finite disjoint union of cells, kept canonical: empty cells dropped,
// cells sorted, and adjacent compatible 1-D cells merged. n-D canonical
// form is sort-only; n-D comparisons go through membership and measure.
class SimpleSet {
 public:
  explicit SimpleSet(int dims = 1) : dims_(dims) {}

  // Cells must be pairwise disjoint; canonicalizes.
  static SimpleSet from_disjoint(int dims, std::vector<Cell> cells);
  static SimpleSet single(const Cell& c);

  int dims() const { return dims_; }
  bool empty() const { return cells_.empty(); }
  const std::vector<Cell>& cells() const { return cells_; }

  bool contains(const std::vector<Rat>& x) const;
  bool contains1(const Rat& x) const;

  bool operator==(const SimpleSet& o) const {
    return dims_ == o.dims_ && cells_ == o.cells_;
  }

  std::string to_string() const;

 private:
  int dims_;
  std::vector<Cell> cells_;
};

// Set difference of cells lands in S(V): at most 2 cells in 1-D and 2n
// cells for n-boxes, pairwise disjoint by construction.
SimpleSet subtract(const Cell& a, const Cell& b);

// Ring operations on simple sets via a common refinement; results are
// disjoint and canonical.
SimpleSet simple_union(const SimpleSet& s, const SimpleSet& t);
SimpleSet simple_intersect(const SimpleSet& s, const SimpleSet& t);
SimpleSet simple_subtract(const SimpleSet& s, const SimpleSet& t);

// True if the two cell lists are pairwise disjoint.
bool pairwise_disjoint(const std::vector<Cell>& cells);

}  // namespace prering
