#include "prering/measure.hpp"

#include <algorithm>

#include "prering/decimal.hpp"
#include "prering/errors.hpp"

namespace prering {

struct Measure::Impl {
  MeasureKind kind;
  int dims = 0;  // 0 = any
  unsigned digits = 0;
  std::optional<Expr> g;
  std::vector<Rat> excluded;
  std::vector<Rat> x0;
  std::vector<Measure> children;
  std::optional<SimpleSet> ambient;
};

namespace {

bool in_excluded(const std::vector<Rat>& ex, const Rat& x) {
  return std::find(ex.begin(), ex.end(), x) != ex.end();
}

Rat eval_g(const Measure::Impl& im, const Rat& x) {
  return im.g->eval({x}, im.digits ? im.digits : default_decimal_digits());
}

// Increment g(b) - g(a) after validating endpoints against the excluded
// set; the integrator must be nondecreasing, so a negative increment is a
// verification failure, not a value.
Rat increment(const Measure::Impl& im, const Rat& a, const Rat& b,
              ErrorCode bad_endpoint) {
  if (in_excluded(im.excluded, a) || in_excluded(im.excluded, b))
    fail(bad_endpoint, "cell endpoint lies in the excluded point set");
  Rat va = eval_g(im, a), vb = eval_g(im, b);
  if (vb < va)
    fail(ErrorCode::MonotonicityViolation,
         "integrator decreases on [" + format_rat(a) + ", " + format_rat(b) +
             "]");
  return vb - va;
}

void require_dims(const Measure::Impl& im, const Cell& a) {
  if (im.dims != 0 && a.dims() != im.dims)
    fail(ErrorCode::DimensionMismatch,
         "measure expects dimension " + std::to_string(im.dims) + ", cell has " +
             std::to_string(a.dims()));
}

bool is_singleton_cell(const Cell& a) {
  for (const Interval& b : a.bounds())
    if (!b.is_singleton()) return false;
  return true;
}

}  // namespace

namespace {

Rat eval_cell(const Measure::Impl& im, const Cell& a) {
  require_dims(im, a);
  if (a.empty()) return Rat(0);
  switch (im.kind) {
    case MeasureKind::kLength:
      return a.bound(0).length();
    case MeasureKind::kVolume:
      return a.volume();
    case MeasureKind::kStieltjes:
      return increment(im, a.bound(0).lo.value, a.bound(0).hi.value,
                       ErrorCode::StieltjesEndpointInD);
    case MeasureKind::kDirac:
      return a.contains(im.x0) ? Rat(1) : Rat(0);
    case MeasureKind::kCounting:
      if (!is_singleton_cell(a))
        fail(ErrorCode::CountingOnNonSingleton,
             "counting measure is defined on the empty set and singletons "
             "only, got " +
                 a.to_string());
      return Rat(1);
    case MeasureKind::kProbDistribution: {
      const Interval& b = a.bound(0);
      if (!b.lo.closed || b.hi.closed)
        fail(ErrorCode::BadInput,
             "distribution measure cells must have the shape [a, b), got " +
                 a.to_string());
      return increment(im, b.lo.value, b.hi.value,
                       ErrorCode::StieltjesEndpointInD);
    }
    case MeasureKind::kRestriction: {
      SimpleSet clipped =
          simple_intersect(SimpleSet::single(a), *im.ambient);
      Rat sum(0);
      for (const Cell& piece : clipped.cells()) sum += im.children[0](piece);
      return sum;
    }
    case MeasureKind::kDirectSum: {
      Rat sum(0);
      for (const Measure& child : im.children) sum += child(a);
      return sum;
    }
    case MeasureKind::kTensor: {
      int d1 = im.children[0].expected_dims();
      std::vector<Interval> left(a.bounds().begin(), a.bounds().begin() + d1);
      std::vector<Interval> right(a.bounds().begin() + d1, a.bounds().end());
      return im.children[0](Cell::make(std::move(left))) *
             im.children[1](Cell::make(std::move(right)));
    }
  }
  fail(ErrorCode::UnsupportedKind, "unknown measure kind");
}

}  // namespace

Measure Measure::length() {
  Impl im;
  im.kind = MeasureKind::kLength;
  im.dims = 1;
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::volume(int dims) {
  if (dims < 0) fail(ErrorCode::BadInput, "volume: negative dimension");
  Impl im;
  im.kind = MeasureKind::kVolume;
  im.dims = dims;
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::stieltjes(Expr g, std::vector<Rat> excluded, unsigned digits) {
  if (g.arity() > 1)
    fail(ErrorCode::BadInput, "stieltjes integrator must be single-variable");
  Impl im;
  im.kind = MeasureKind::kStieltjes;
  im.dims = 1;
  im.digits = g.exact() ? 0 : (digits ? digits : default_decimal_digits());
  im.g = std::move(g);
  im.excluded = std::move(excluded);
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::dirac(std::vector<Rat> x0) {
  if (x0.empty()) fail(ErrorCode::BadInput, "dirac: empty location");
  Impl im;
  im.kind = MeasureKind::kDirac;
  im.dims = int(x0.size());
  im.x0 = std::move(x0);
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::counting() {
  Impl im;
  im.kind = MeasureKind::kCounting;
  im.dims = 0;
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::prob_distribution(Expr F, std::vector<Rat> excluded,
                                   unsigned digits) {
  if (F.arity() > 1)
    fail(ErrorCode::BadInput, "distribution function must be single-variable");
  Impl im;
  im.kind = MeasureKind::kProbDistribution;
  im.dims = 1;
  im.digits = F.exact() ? 0 : (digits ? digits : default_decimal_digits());
  im.g = std::move(F);
  im.excluded = std::move(excluded);
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::restriction(Measure parent, SimpleSet ambient) {
  Impl im;
  im.kind = MeasureKind::kRestriction;
  im.dims = ambient.dims();
  im.digits = parent.digits();
  im.children.push_back(std::move(parent));
  im.ambient = std::move(ambient);
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::direct_sum(std::vector<Measure> children) {
  if (children.empty())
    fail(ErrorCode::BadInput, "direct_sum: no children");
  Impl im;
  im.kind = MeasureKind::kDirectSum;
  im.dims = 0;
  for (const Measure& c : children) {
    if (c.expected_dims() != 0) {
      if (im.dims != 0 && im.dims != c.expected_dims())
        fail(ErrorCode::DimensionMismatch,
             "direct_sum children disagree on dimension");
      im.dims = c.expected_dims();
    }
    im.digits = std::max(im.digits, c.digits());
  }
  im.children = std::move(children);
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

Measure Measure::tensor(Measure m1, Measure m2) {
  if (m1.expected_dims() == 0 || m2.expected_dims() == 0)
    fail(ErrorCode::BadInput,
         "tensor factors must have a determinate dimension");
  Impl im;
  im.kind = MeasureKind::kTensor;
  im.dims = m1.expected_dims() + m2.expected_dims();
  im.digits = std::max(m1.digits(), m2.digits());
  im.children.push_back(std::move(m1));
  im.children.push_back(std::move(m2));
  return Measure(std::make_shared<const Impl>(std::move(im)));
}

MeasureKind Measure::kind() const { return impl_->kind; }

bool Measure::exact() const {
  if (impl_->digits != 0) return false;
  for (const Measure& c : impl_->children)
    if (!c.exact()) return false;
  return true;
}

unsigned Measure::digits() const { return impl_->digits; }

int Measure::expected_dims() const { return impl_->dims; }

std::optional<Expr> Measure::integrator() const { return impl_->g; }

const std::vector<Rat>& Measure::excluded() const { return impl_->excluded; }

Rat Measure::operator()(const Cell& a) const { return eval_cell(*impl_, a); }

Rat Measure::on_simple(const SimpleSet& s) const {
  Rat sum(0);
  for (const Cell& c : s.cells()) sum += (*this)(c);
  return sum;
}

Rat Measure::ext(const ExtInterval& i) const {
  if (impl_->kind != MeasureKind::kProbDistribution)
    fail(ErrorCode::UnsupportedKind,
         "unbounded intervals are confined to the distribution measure");
  // F(-inf) = 0 and F(+inf) = 1 by definition of a distribution function.
  Rat flo = i.lo ? eval_g(*impl_, *i.lo) : Rat(0);
  Rat fhi = i.hi ? eval_g(*impl_, *i.hi) : Rat(1);
  if (i.lo && in_excluded(impl_->excluded, *i.lo))
    fail(ErrorCode::StieltjesEndpointInD,
         "interval endpoint lies in the excluded point set");
  if (i.hi && in_excluded(impl_->excluded, *i.hi))
    fail(ErrorCode::StieltjesEndpointInD,
         "interval endpoint lies in the excluded point set");
  if (i.lo && i.hi && *i.hi < *i.lo)
    fail(ErrorCode::BadInput, "interval endpoints out of order");
  if (fhi < flo)
    fail(ErrorCode::MonotonicityViolation, "distribution function decreases");
  return fhi - flo;
}

std::string Measure::describe() const {
  switch (impl_->kind) {
    case MeasureKind::kLength:
      return "length";
    case MeasureKind::kVolume:
      return impl_->dims ? "volume[" + std::to_string(impl_->dims) + "]"
                         : "volume";
    case MeasureKind::kStieltjes:
      return "stieltjes(" + impl_->g->source() + ")";
    case MeasureKind::kDirac: {
      std::string s = "dirac(";
      for (size_t i = 0; i < impl_->x0.size(); ++i) {
        if (i) s += ",";
        s += format_rat(impl_->x0[i]);
      }
      return s + ")";
    }
    case MeasureKind::kCounting:
      return "counting";
    case MeasureKind::kProbDistribution:
      return "prob-distribution(" + impl_->g->source() + ")";
    case MeasureKind::kRestriction:
      return "restriction(" + impl_->children[0].describe() + ", " +
             impl_->ambient->to_string() + ")";
    case MeasureKind::kDirectSum: {
      std::string s = "direct-sum(";
      for (size_t i = 0; i < impl_->children.size(); ++i) {
        if (i) s += ", ";
        s += impl_->children[i].describe();
      }
      return s + ")";
    }
    case MeasureKind::kTensor:
      return "tensor(" + impl_->children[0].describe() + ", " +
             impl_->children[1].describe() + ")";
  }
  return "?";
}

AdditivityReport check_countable_additivity(const Measure& m, const Cell& a,
                                            const std::vector<Cell>& decomposition,
                                            int N) {
  if (N < 0 || size_t(N) > decomposition.size())
    fail(ErrorCode::BadInput, "additivity check: N out of range");
  AdditivityReport report;
  report.total = Rat(0);
  for (int i = 0; i < N; ++i) {
    const Cell& ci = decomposition[size_t(i)];
    if (!(intersect(ci, a) == ci))
      fail(ErrorCode::ContainmentViolation,
           "decomposition cell " + std::to_string(i) +
               " is not contained in the target cell");
    for (int j = 0; j < i; ++j)
      if (!intersect(ci, decomposition[size_t(j)]).empty())
        fail(ErrorCode::DisjointnessViolation,
             "decomposition cells " + std::to_string(j) + " and " +
                 std::to_string(i) + " overlap");
    report.total += m(ci);
    report.partial_sums.push_back(report.total);
  }
  report.residual = m(a) - report.total;
  if (m.exact() && report.residual < 0)
    fail(ErrorCode::RuleViolation,
         "partial sums exceed the measure of the whole cell");
  return report;
}

bool translate_invariance_check(const Measure& m, const Cell& a, const Rat& h) {
  if (m.kind() != MeasureKind::kLength && m.kind() != MeasureKind::kVolume)
    fail(ErrorCode::UnsupportedKind,
         "translate invariance applies to length/volume only");
  if (a.empty()) return true;
  std::vector<Interval> shifted = a.bounds();
  for (Interval& b : shifted) {
    b.lo.value -= h;
    b.hi.value -= h;
  }
  return m(Cell::make(std::move(shifted))) == m(a);
}

}  // namespace prering
