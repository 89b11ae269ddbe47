#include "prering/refine.hpp"

#include <algorithm>
#include <cstdint>

namespace prering {

namespace {

struct DimRun {
  Interval span;
  std::vector<std::uint64_t> mask;  // bit i set: input i covers this run
};

bool mask_equal(const std::vector<std::uint64_t>& a,
                const std::vector<std::uint64_t>& b) {
  return a == b;
}

bool mask_empty(const std::vector<std::uint64_t>& m) {
  for (auto w : m) {
    if (w) return false;
  }
  return true;
}

// Coarsest partition of dimension d into intervals on the endpoint grid
// such that every input cell's d-extent is a union of runs.
std::vector<DimRun> sweep_dimension(const std::vector<Cell>& family, int d) {
  std::vector<Rat> values;
  for (const Cell& c : family) {
    if (c.empty()) continue;
    values.push_back(c.bound(d).lo.value);
    values.push_back(c.bound(d).hi.value);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) return {};

  size_t words = (family.size() + 63) / 64;
  auto atom_mask = [&](const Rat& probe) {
    std::vector<std::uint64_t> m(words, 0);
    for (size_t i = 0; i < family.size(); ++i) {
      if (family[i].empty()) continue;
      if (family[i].bound(d).contains(probe))
        m[i / 64] |= (std::uint64_t{1} << (i % 64));
    }
    return m;
  };

  // Atoms alternate singleton [v_i] and open gap (v_i, v_{i+1}); an open
  // gap is covered by an input interval iff its midpoint is, because all
  // interval endpoints lie on the grid.
  struct Atom {
    Interval span;
    std::vector<std::uint64_t> mask;
  };
  std::vector<Atom> atoms;
  for (size_t i = 0; i < values.size(); ++i) {
    Interval single{Endpoint{values[i], true}, Endpoint{values[i], true}};
    atoms.push_back({single, atom_mask(values[i])});
    if (i + 1 < values.size()) {
      Interval gap{Endpoint{values[i], false}, Endpoint{values[i + 1], false}};
      atoms.push_back({gap, atom_mask((values[i] + values[i + 1]) / 2)});
    }
  }

  // Merge maximal runs of atoms with identical masks, then drop uncovered
  // runs. Runs are contiguous, so each merged span is again an interval.
  std::vector<DimRun> runs;
  for (Atom& a : atoms) {
    if (!runs.empty() && mask_equal(runs.back().mask, a.mask)) {
      runs.back().span.hi = a.span.hi;
    } else {
      runs.push_back({a.span, std::move(a.mask)});
    }
  }
  runs.erase(std::remove_if(runs.begin(), runs.end(),
                            [](const DimRun& r) { return mask_empty(r.mask); }),
             runs.end());
  return runs;
}

}  // namespace

Refinement refine(const std::vector<Cell>& family) {
  Refinement out;
  out.composition.resize(family.size());
  if (family.empty()) return out;
  int dims = family.front().dims();
  for (const Cell& c : family) {
    if (c.dims() != dims) fail(ErrorCode::DimensionMismatch, "refine: dims differ");
  }

  std::vector<std::vector<DimRun>> grid(dims);
  for (int d = 0; d < dims; ++d) {
    grid[d] = sweep_dimension(family, d);
    if (grid[d].empty()) return out;  // all inputs empty
  }

  // Enumerate the grid in lexicographic run order; keep cells covered by
  // at least one input.
  std::vector<size_t> idx(dims, 0);
  size_t words = (family.size() + 63) / 64;
  for (;;) {
    std::vector<std::uint64_t> mask(words, ~std::uint64_t{0});
    std::vector<Interval> bounds;
    bounds.reserve(dims);
    for (int d = 0; d < dims; ++d) {
      const DimRun& run = grid[d][idx[d]];
      bounds.push_back(run.span);
      for (size_t w = 0; w < words; ++w) mask[w] &= run.mask[w];
    }
    if (!mask_empty(mask)) {
      Cell cell = Cell::make(std::move(bounds));
      int ci = static_cast<int>(out.cells.size());
      out.cells.push_back(std::move(cell));
      for (size_t i = 0; i < family.size(); ++i) {
        if (mask[i / 64] & (std::uint64_t{1} << (i % 64))) {
          out.composition[i].push_back(ci);
        }
      }
    }
    int d = dims - 1;
    while (d >= 0 && ++idx[d] == grid[d].size()) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

Refinement tensor_refine(const std::vector<Cell>& family_a,
                         const std::vector<Cell>& family_b) {
  Refinement ra = refine(family_a);
  Refinement rb = refine(family_b);
  Refinement out;
  out.composition.resize(family_a.size() * family_b.size());
  if (family_a.empty() || family_b.empty()) return out;
  // Product cells in row-major order over (ra.cells, rb.cells).
  for (const Cell& ca : ra.cells) {
    for (const Cell& cb : rb.cells) {
      out.cells.push_back(tensor(ca, cb));
    }
  }
  size_t nb = rb.cells.size();
  for (size_t i = 0; i < family_a.size(); ++i) {
    for (size_t j = 0; j < family_b.size(); ++j) {
      auto& row = out.composition[i * family_b.size() + j];
      for (int ca : ra.composition[i]) {
        for (int cb : rb.composition[j]) {
          row.push_back(static_cast<int>(ca * nb + cb));
        }
      }
      std::sort(row.begin(), row.end());
    }
  }
  return out;
}

}  // namespace prering
