#include "prering/simple_set.hpp"

#include <algorithm>
#include <sstream>

#include "prering/refine.hpp"

namespace prering {

namespace {

// 1-D: upper of `a` touches lower of `b` with exactly one side closed,
// so the union is again an interval and the operands were disjoint.
bool mergeable_adjacent(const Cell& a, const Cell& b) {
  if (a.dims() != 1) return false;
  const Interval& x = a.bound(0);
  const Interval& y = b.bound(0);
  return x.hi.value == y.lo.value && (x.hi.closed != y.lo.closed);
}

}  // namespace

SimpleSet SimpleSet::from_disjoint(int dims, std::vector<Cell> cells) {
  std::vector<Cell> kept;
  kept.reserve(cells.size());
  for (Cell& c : cells) {
    if (c.empty()) continue;
    if (c.dims() != dims) fail(ErrorCode::DimensionMismatch, "simple set cell dims");
    kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), cell_less);
  if (dims == 1) {
    std::vector<Cell> merged;
    for (Cell& c : kept) {
      if (!merged.empty() && mergeable_adjacent(merged.back(), c)) {
        const Interval& x = merged.back().bound(0);
        const Interval& y = c.bound(0);
        merged.back() = Cell::make({Interval{x.lo, y.hi}});
      } else {
        merged.push_back(std::move(c));
      }
    }
    kept = std::move(merged);
  }
  SimpleSet s(dims);
  s.cells_ = std::move(kept);
  return s;
}

SimpleSet SimpleSet::single(const Cell& c) {
  return from_disjoint(c.dims(), {c});
}

bool SimpleSet::contains(const std::vector<Rat>& x) const {
  for (const Cell& c : cells_) {
    if (c.contains(x)) return true;
  }
  return false;
}

bool SimpleSet::contains1(const Rat& x) const {
  for (const Cell& c : cells_) {
    if (c.contains1(x)) return true;
  }
  return false;
}

std::string SimpleSet::to_string() const {
  if (cells_.empty()) return "{}";
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (i) os << ", ";
    os << cells_[i].to_string();
  }
  os << "}";
  return os.str();
}

SimpleSet subtract(const Cell& a, const Cell& b) {
  if (a.dims() != b.dims())
    fail(ErrorCode::DimensionMismatch, "subtract: dims differ");
  if (a.empty()) return SimpleSet(a.dims());
  Cell c = intersect(a, b);
  if (c.empty()) return SimpleSet::single(a);
  std::vector<Cell> pieces;
  for (int d = 0; d < a.dims(); ++d) {
    // dims < d pinned to the intersection, dims > d keep a's extent;
    // dim d takes the part of a strictly below / above c.
    std::vector<Interval> left, right;
    for (int k = 0; k < d; ++k) {
      left.push_back(c.bound(k));
      right.push_back(c.bound(k));
    }
    const Interval& ad = a.bound(d);
    const Interval& cd = c.bound(d);
    left.push_back(Interval{ad.lo, Endpoint{cd.lo.value, !cd.lo.closed}});
    right.push_back(Interval{Endpoint{cd.hi.value, !cd.hi.closed}, ad.hi});
    for (int k = d + 1; k < a.dims(); ++k) {
      left.push_back(a.bound(k));
      right.push_back(a.bound(k));
    }
    Cell lc = Cell::make(std::move(left));
    Cell rc = Cell::make(std::move(right));
    if (!lc.empty()) pieces.push_back(std::move(lc));
    if (!rc.empty()) pieces.push_back(std::move(rc));
  }
  return SimpleSet::from_disjoint(a.dims(), std::move(pieces));
}

namespace {

SimpleSet combine(const SimpleSet& s, const SimpleSet& t,
                  bool keep_s_only, bool keep_both, bool keep_t_only) {
  if (s.dims() != t.dims())
    fail(ErrorCode::DimensionMismatch, "simple set op: dims differ");
  std::vector<Cell> family = s.cells();
  family.insert(family.end(), t.cells().begin(), t.cells().end());
  Refinement r = refine(family);
  size_t ns = s.cells().size();
  std::vector<char> in_s(r.cells.size(), 0), in_t(r.cells.size(), 0);
  for (size_t i = 0; i < r.composition.size(); ++i) {
    for (int ci : r.composition[i]) {
      (i < ns ? in_s : in_t)[ci] = 1;
    }
  }
  std::vector<Cell> out;
  for (size_t ci = 0; ci < r.cells.size(); ++ci) {
    bool pick = in_s[ci] ? (in_t[ci] ? keep_both : keep_s_only)
                         : (in_t[ci] ? keep_t_only : false);
    if (pick) out.push_back(r.cells[ci]);
  }
  return SimpleSet::from_disjoint(s.dims(), std::move(out));
}

}  // namespace

SimpleSet simple_union(const SimpleSet& s, const SimpleSet& t) {
  return combine(s, t, true, true, true);
}

SimpleSet simple_intersect(const SimpleSet& s, const SimpleSet& t) {
  return combine(s, t, false, true, false);
}

SimpleSet simple_subtract(const SimpleSet& s, const SimpleSet& t) {
  return combine(s, t, true, false, false);
}

bool pairwise_disjoint(const std::vector<Cell>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t j = i + 1; j < cells.size(); ++j) {
      if (!intersect(cells[i], cells[j]).empty()) return false;
    }
  }
  return true;
}

}  // namespace prering
