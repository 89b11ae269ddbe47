#include "prering/cell.hpp"

#include <sstream>

namespace prering {

Cell Cell::empty_cell(int dims) {
  Cell c;
  c.dims_ = dims;
  c.empty_ = true;
  return c;
}

Cell Cell::make(std::vector<Interval> bounds) {
  if (bounds.empty()) fail(ErrorCode::BadInput, "cell needs at least one dimension");
  for (const Interval& iv : bounds) {
    if (iv.degenerate_empty()) return empty_cell(static_cast<int>(bounds.size()));
  }
  Cell c;
  c.dims_ = static_cast<int>(bounds.size());
  c.empty_ = false;
  c.bounds_ = std::move(bounds);
  return c;
}

Cell Cell::interval(const Rat& lo, bool lo_closed, const Rat& hi, bool hi_closed) {
  return make({Interval{Endpoint{lo, lo_closed}, Endpoint{hi, hi_closed}}});
}

bool Cell::contains(const std::vector<Rat>& x) const {
  if (empty_) return false;
  if (static_cast<int>(x.size()) != dims_)
    fail(ErrorCode::DimensionMismatch, "point dims != cell dims");
  for (int d = 0; d < dims_; ++d) {
    if (!bounds_[d].contains(x[d])) return false;
  }
  return true;
}

bool Cell::contains1(const Rat& x) const {
  if (empty_) return false;
  if (dims_ != 1) fail(ErrorCode::DimensionMismatch, "contains1 on n-box");
  return bounds_[0].contains(x);
}

Rat Cell::volume() const {
  if (empty_) return Rat(0);
  Rat v(1);
  for (const Interval& iv : bounds_) v *= iv.length();
  return v;
}

bool Cell::operator==(const Cell& o) const {
  if (dims_ != o.dims_) return false;
  if (empty_ || o.empty_) return empty_ == o.empty_;
  return bounds_ == o.bounds_;
}

std::string Cell::to_string() const {
  if (empty_) return "{}";
  std::ostringstream os;
  for (int d = 0; d < dims_; ++d) {
    if (d) os << "x";
    const Interval& iv = bounds_[d];
    os << (iv.lo.closed ? "[" : "(") << format_rat(iv.lo.value) << ","
       << format_rat(iv.hi.value) << (iv.hi.closed ? "]" : ")");
  }
  return os.str();
}

Cell intersect(const Cell& a, const Cell& b) {
  if (a.dims() != b.dims())
    fail(ErrorCode::DimensionMismatch, "intersect: dims differ");
  if (a.empty() || b.empty()) return Cell::empty_cell(a.dims());
  std::vector<Interval> out;
  out.reserve(a.dims());
  for (int d = 0; d < a.dims(); ++d) {
    const Interval& x = a.bound(d);
    const Interval& y = b.bound(d);
    Endpoint lo = x.lo;
    if (y.lo.value > lo.value) {
      lo = y.lo;
    } else if (y.lo.value == lo.value) {
      lo.closed = lo.closed && y.lo.closed;
    }
    Endpoint hi = x.hi;
    if (y.hi.value < hi.value) {
      hi = y.hi;
    } else if (y.hi.value == hi.value) {
      hi.closed = hi.closed && y.hi.closed;
    }
    out.push_back(Interval{lo, hi});
  }
  return Cell::make(std::move(out));
}

Cell tensor(const Cell& a, const Cell& b) {
  int dims = a.dims() + b.dims();
  if (a.empty() || b.empty()) return Cell::empty_cell(dims);
  std::vector<Interval> out = a.bounds();
  out.insert(out.end(), b.bounds().begin(), b.bounds().end());
  return Cell::make(std::move(out));
}

bool cell_less(const Cell& a, const Cell& b) {
  if (a.dims() != b.dims()) return a.dims() < b.dims();
  if (a.empty() != b.empty()) return a.empty();
  if (a.empty()) return false;
  for (int d = 0; d < a.dims(); ++d) {
    const Interval& x = a.bound(d);
    const Interval& y = b.bound(d);
    if (x.lo.value != y.lo.value) return x.lo.value < y.lo.value;
    if (x.lo.closed != y.lo.closed) return x.lo.closed;  // closed start first
    if (x.hi.value != y.hi.value) return x.hi.value < y.hi.value;
    if (x.hi.closed != y.hi.closed) return !x.hi.closed;  // open end first
  }
  return false;
}

}  // namespace prering
