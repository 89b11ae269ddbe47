#pragma once

#include <vector>

#include "prering/errors.hpp"
#include "prering/rational.hpp"

namespace prering {

struct Endpoint {
  Rat value;
  bool closed = true;

  bool operator==(const Endpoint&) const = default;
};

// One dimension of a cell: an interval with open/closed flags on each side.
struct Interval {
  Endpoint lo;
  Endpoint hi;

  bool operator==(const Interval&) const = default;

  // Normalized emptiness: lo > hi, or lo == hi without both sides closed.
  bool degenerate_empty() const {
    if (lo.value > hi.value) return true;
    if (lo.value == hi.value) return !(lo.closed && hi.closed);
    return false;
  }

  bool contains(const Rat& x) const {
    if (x < lo.value || x > hi.value) return false;
    if (x == lo.value && !lo.closed) return false;
    if (x == hi.value && !hi.closed) return false;
    return true;
  }

  bool is_singleton() const { return lo.value == hi.value; }
  Rat length() const { return hi.value - lo.value; }
};

// A prering cell: a rational-endpoint interval (dims = 1) or n-box.
// The empty cell is canonical: `empty` set, no bounds stored. Every
// constructor normalizes, so (a,a)-style degenerate input collapses to it.
class Cell {
 public:
  Cell() : dims_(1), empty_(true) {}

  static Cell empty_cell(int dims);
  static Cell make(std::vector<Interval> bounds);
  // 1-D convenience.
  static Cell interval(const Rat& lo, bool lo_closed, const Rat& hi,
                       bool hi_closed);
  static Cell closed_interval(const Rat& lo, const Rat& hi) {
    return interval(lo, true, hi, true);
  }
  static Cell half_open(const Rat& lo, const Rat& hi) {
    return interval(lo, true, hi, false);
  }
  static Cell point(const Rat& x) { return interval(x, true, x, true); }

  int dims() const { return dims_; }
  bool empty() const { return empty_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const Interval& bound(int d) const { return bounds_[d]; }

  bool contains(const std::vector<Rat>& x) const;
  bool contains1(const Rat& x) const;

  // Product measure of side lengths; 0 for the empty cell.
  Rat volume() const;

  bool operator==(const Cell& o) const;

  std::string to_string() const;

 private:
  int dims_;
  bool empty_;
  std::vector<Interval> bounds_;
};

// Intersection of two cells is again a cell (possibly empty).
Cell intersect(const Cell& a, const Cell& b);

// a x b with dims adding.
Cell tensor(const Cell& a, const Cell& b);

// Deterministic total order on cells used for canonical sorting.
bool cell_less(const Cell& a, const Cell& b);

}  // namespace prering
