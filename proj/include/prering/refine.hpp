#pragma once

#include <vector>

#include "prering/simple_set.hpp"

namespace prering {

// Finite disjoint refinement of a family of cells: every input cell is
// reassembled exactly as the union of the refinement cells listed in its
// composition row.
struct Refinement {
  std::vector<Cell> cells;                    // disjoint, nonempty
  std::vector<std::vector<int>> composition;  // input index -> cell indexes
};

// Deterministic per-dimension endpoint sweep producing the coarsest
// grid-aligned refinement, empty cells dropped. Empty input family yields
// an empty refinement; empty input cells get empty composition rows.
Refinement refine(const std::vector<Cell>& family);

// Refinement of the family of all pairwise products A_i x B_j, indexed
// row-major: input index = i * |familyB| + j.
Refinement tensor_refine(const std::vector<Cell>& family_a,
                         const std::vector<Cell>& family_b);

}  // namespace prering
