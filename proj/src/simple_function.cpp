#include "prering/simple_function.hpp"

#include <algorithm>

#include "prering/errors.hpp"
#include "prering/refine.hpp"

namespace prering {

SimpleFunction::SimpleFunction(int dims, int vdim) : dims_(dims), vdim_(vdim) {
  if (dims < 1 || vdim < 1)
    fail(ErrorCode::BadInput, "simple function needs positive dimensions");
}

SimpleFunction SimpleFunction::from_terms(int dims, int vdim,
                                          const std::vector<Term>& terms) {
  SimpleFunction h(dims, vdim);
  std::vector<Cell> cells;
  for (const Term& t : terms) {
    if (int(t.y.size()) != vdim)
      fail(ErrorCode::DimensionMismatch,
           "term value dimension differs from the declared value space");
    if (t.cell.dims() != dims)
      fail(ErrorCode::DimensionMismatch,
           "term cell dimension differs from the declared domain");
    cells.push_back(t.cell);
  }
  Refinement r = refine(cells);
  std::vector<Vec> sums(r.cells.size(), vec_zero(vdim));
  for (size_t i = 0; i < terms.size(); ++i)
    for (int idx : r.composition[i])
      sums[size_t(idx)] = vec_add(sums[size_t(idx)], terms[i].y);
  for (size_t k = 0; k < r.cells.size(); ++k)
    if (!vec_is_zero(sums[k])) h.terms_.push_back({sums[k], r.cells[k]});
  return h;
}

Vec SimpleFunction::eval(const std::vector<Rat>& x) const {
  for (const Term& t : terms_)
    if (t.cell.contains(x)) return t.y;
  return vec_zero(vdim_);
}

Vec SimpleFunction::eval1(const Rat& x) const { return eval({x}); }

SimpleFunction SimpleFunction::plus(const SimpleFunction& o) const {
  if (dims_ != o.dims_ || vdim_ != o.vdim_)
    fail(ErrorCode::DimensionMismatch, "simple function shapes differ");
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(dims_, vdim_, all);
}

SimpleFunction SimpleFunction::scaled(const Rat& c) const {
  SimpleFunction h(dims_, vdim_);
  if (c == 0) return h;
  for (const Term& t : terms_) h.terms_.push_back({vec_scale(c, t.y), t.cell});
  return h;
}

Vec integral(const SimpleFunction& h, const Measure& v) {
  Vec sum = vec_zero(h.vdim());
  for (const SimpleFunction::Term& t : h.terms())
    sum = vec_add(sum, vec_scale(v(t.cell), t.y));
  return sum;
}

Radical seminorm(const SimpleFunction& h, const Measure& v) {
  Radical sum;
  for (const SimpleFunction::Term& t : h.terms())
    sum += Radical::sqrt_term(vec_norm_sq(t.y), v(t.cell));
  return sum;
}

namespace {

// Zero-preserving composition of two simple functions over a common
// refinement: op receives the pointwise values (zero off-support).
SimpleFunction compose(const SimpleFunction& f, const SimpleFunction& g,
                       int out_vdim, Vec (*op)(const Vec&, const Vec&)) {
  if (f.dims() != g.dims())
    fail(ErrorCode::DimensionMismatch, "domain dimensions differ");
  std::vector<Cell> cells;
  for (const SimpleFunction::Term& t : f.terms()) cells.push_back(t.cell);
  for (const SimpleFunction::Term& t : g.terms()) cells.push_back(t.cell);
  Refinement r = refine(cells);
  size_t nf = f.terms().size();
  std::vector<Vec> fv(r.cells.size(), vec_zero(f.vdim()));
  std::vector<Vec> gv(r.cells.size(), vec_zero(g.vdim()));
  for (size_t i = 0; i < nf; ++i)
    for (int idx : r.composition[i]) fv[size_t(idx)] = f.terms()[i].y;
  for (size_t i = nf; i < cells.size(); ++i)
    for (int idx : r.composition[i]) gv[size_t(idx)] = g.terms()[i - nf].y;
  std::vector<SimpleFunction::Term> out;
  for (size_t k = 0; k < r.cells.size(); ++k) {
    Vec y = op(fv[k], gv[k]);
    if (!vec_is_zero(y)) out.push_back({y, r.cells[k]});
  }
  return SimpleFunction::from_terms(f.dims(), out_vdim, out);
}

Vec product_op(const Vec& gy, const Vec& fy) {
  // gy is scalar; zero off-support keeps the product zero-preserving.
  return vec_scale(gy[0], fy);
}

Vec sup_op(const Vec& a, const Vec& b) { return {std::max(a[0], b[0])}; }
Vec inf_op(const Vec& a, const Vec& b) { return {std::min(a[0], b[0])}; }

}  // namespace

SimpleFunction pointwise_product(const SimpleFunction& g,
                                 const SimpleFunction& f) {
  if (g.vdim() != 1)
    fail(ErrorCode::DimensionMismatch,
         "product multiplier must be scalar-valued");
  return compose(g, f, f.vdim(), product_op);
}

SimpleFunction pointwise_sup(const SimpleFunction& f, const SimpleFunction& g) {
  if (f.vdim() != 1 || g.vdim() != 1)
    fail(ErrorCode::DimensionMismatch, "sup/inf need scalar values");
  return compose(f, g, 1, sup_op);
}

SimpleFunction pointwise_inf(const SimpleFunction& f, const SimpleFunction& g) {
  if (f.vdim() != 1 || g.vdim() != 1)
    fail(ErrorCode::DimensionMismatch, "sup/inf need scalar values");
  return compose(f, g, 1, inf_op);
}

void check_integral_norm_bound(const SimpleFunction& h, const Measure& v) {
  // |sum y_i v_i|^2 = sum_{i,j} <y_i, y_j> v_i v_j and the seminorm square
  // expands to sum_{i,j} |y_i||y_j| v_i v_j, so the bound follows once
  // every pair satisfies Cauchy-Schwarz; each pair is decided exactly in
  // rational squares.
  const auto& terms = h.terms();
  for (size_t i = 0; i < terms.size(); ++i) {
    Rat vi = v(terms[i].cell);
    if (vi < 0) fail(ErrorCode::RuleViolation, "negative measure value");
    for (size_t j = i; j < terms.size(); ++j) {
      Rat dot = vec_dot(terms[i].y, terms[j].y);
      if (dot <= 0) continue;
      Rat ni = vec_norm_sq(terms[i].y), nj = vec_norm_sq(terms[j].y);
      if (dot * dot > ni * nj)
        fail(ErrorCode::RuleViolation,
             "Cauchy-Schwarz certificate failed on a term pair");
    }
  }
}

}  // namespace prering
