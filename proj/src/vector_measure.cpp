#include "prering/vector_measure.hpp"

#include <algorithm>

#include "prering/errors.hpp"
#include "prering/refine.hpp"

namespace prering {

BilinearOp BilinearOp::from_name(const std::string& name) {
  if (name == "scalar-multiply") return BilinearOp(Kind::kScalarMultiply);
  if (name == "componentwise") return BilinearOp(Kind::kComponentwise);
  if (name == "dot-product") return BilinearOp(Kind::kDotProduct);
  fail(ErrorCode::BadInput, "unknown bilinear op: " + name);
}

const char* BilinearOp::name() const {
  switch (kind_) {
    case Kind::kScalarMultiply:
      return "scalar-multiply";
    case Kind::kComponentwise:
      return "componentwise";
    case Kind::kDotProduct:
      return "dot-product";
  }
  return "?";
}

int BilinearOp::result_dim(int ydim, int zdim) const {
  switch (kind_) {
    case Kind::kScalarMultiply:
      if (ydim != 1)
        fail(ErrorCode::DimensionMismatch,
             "scalar-multiply takes a scalar left argument");
      return zdim;
    case Kind::kComponentwise:
      if (ydim != zdim)
        fail(ErrorCode::DimensionMismatch,
             "componentwise pairing needs equal dimensions");
      return ydim;
    case Kind::kDotProduct:
      if (ydim != zdim)
        fail(ErrorCode::DimensionMismatch,
             "dot product needs equal dimensions");
      return 1;
  }
  fail(ErrorCode::UnsupportedKind, "unknown bilinear op");
}

Vec BilinearOp::apply(const Vec& y, const Vec& z) const {
  result_dim(int(y.size()), int(z.size()));
  switch (kind_) {
    case Kind::kScalarMultiply:
      return vec_scale(y[0], z);
    case Kind::kComponentwise: {
      Vec out(y.size());
      for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] * z[i];
      return out;
    }
    case Kind::kDotProduct:
      return {vec_dot(y, z)};
  }
  fail(ErrorCode::UnsupportedKind, "unknown bilinear op");
}

VectorMeasure VectorMeasure::constant(Vec density, Measure base) {
  if (density.empty()) fail(ErrorCode::BadInput, "empty density vector");
  VectorMeasure mu(std::move(base), int(density.size()));
  mu.constant_ = true;
  mu.const_density_ = std::move(density);
  return mu;
}

VectorMeasure VectorMeasure::piecewise(std::vector<SimpleFunction::Term> grid,
                                       Measure base) {
  if (grid.empty()) fail(ErrorCode::BadInput, "empty density grid");
  std::vector<Cell> cells;
  for (const auto& t : grid) cells.push_back(t.cell);
  if (!pairwise_disjoint(cells))
    fail(ErrorCode::DisjointnessViolation, "density grid cells overlap");
  int zdim = int(grid[0].y.size());
  for (const auto& t : grid)
    if (int(t.y.size()) != zdim)
      fail(ErrorCode::DimensionMismatch, "density dimensions differ");
  VectorMeasure mu(std::move(base), zdim);
  mu.grid_ = std::move(grid);
  return mu;
}

Vec VectorMeasure::operator()(const Cell& a) const {
  Vec out = vec_zero(zdim_);
  Rat covered(0);
  if (constant_) {
    Rat v = base_(a);
    out = vec_scale(v, const_density_);
    covered = v;
  } else {
    for (const auto& t : grid_) {
      Cell piece = intersect(a, t.cell);
      if (piece.empty()) continue;
      Rat v = base_(piece);
      out = vec_add(out, vec_scale(v, t.y));
      covered += v;
    }
  }
  // The declared bound is the largest density norm; every evaluation is
  // checked against it exactly (in squares).
  Rat whole = base_(a);
  if (vec_norm_sq(out) > norm_sq() * whole * whole)
    fail(ErrorCode::RuleViolation,
         "vector measure exceeded its declared bound");
  return out;
}

Vec VectorMeasure::on_simple(const SimpleSet& s) const {
  Vec out = vec_zero(zdim_);
  for (const Cell& c : s.cells()) out = vec_add(out, (*this)(c));
  return out;
}

Rat VectorMeasure::norm_sq() const {
  if (constant_) return vec_norm_sq(const_density_);
  Rat best(0);
  for (const auto& t : grid_) best = std::max(best, vec_norm_sq(t.y));
  return best;
}

Radical VectorMeasure::norm() const { return Radical::sqrt_term(norm_sq()); }

Vec trilinear_integral(const BilinearOp& u, const SimpleFunction& h,
                       const VectorMeasure& mu) {
  int out_dim = u.result_dim(h.vdim(), mu.zdim());
  Vec sum = vec_zero(out_dim);
  for (const SimpleFunction::Term& t : h.terms())
    sum = vec_add(sum, u.apply(t.y, mu(t.cell)));
  return sum;
}

Radical variation(const VectorMeasure& mu, const Cell& a, int depth) {
  if (depth < 0) fail(ErrorCode::BadInput, "variation: negative depth");
  std::vector<Cell> parts;
  if (depth == 0 || mu.is_constant()) {
    parts.push_back(a);
  } else {
    // Resolve the density grid: pieces of a inside each grid cell plus
    // the remainder outside the grid.
    SimpleSet rest = SimpleSet::single(a);
    for (const auto& t : mu.grid()) {
      Cell piece = intersect(a, t.cell);
      if (!piece.empty()) parts.push_back(piece);
      rest = simple_subtract(rest, SimpleSet::single(t.cell));
    }
    for (const Cell& c : rest.cells()) parts.push_back(c);
  }
  Radical sum;
  for (const Cell& c : parts) {
    if (c.empty()) continue;
    sum += Radical::sqrt_term(vec_norm_sq(mu(c)));
  }
  return sum;
}

Vec completion_on_simple(const VectorMeasure& mu, const SimpleSet& s) {
  return mu.on_simple(s);
}

void check_trilinear_norm_bound(const BilinearOp& u, const SimpleFunction& h,
                                const VectorMeasure& mu) {
  // Chain: |sum u(y_i, mu_i)| <= sum |u(y_i, mu_i)| (triangle, pairwise
  // Cauchy-Schwarz) <= sum |y_i| |mu_i| (|u| = 1, termwise in squares)
  // <= |mu| sum |y_i| v_i (bound, termwise in squares). Every step is an
  // exact rational comparison.
  std::vector<Vec> zs;
  for (const SimpleFunction::Term& t : h.terms())
    zs.push_back(u.apply(t.y, mu(t.cell)));
  for (size_t i = 0; i < zs.size(); ++i)
    for (size_t j = i + 1; j < zs.size(); ++j) {
      Rat dot = vec_dot(zs[i], zs[j]);
      if (dot <= 0) continue;
      if (dot * dot > vec_norm_sq(zs[i]) * vec_norm_sq(zs[j]))
        fail(ErrorCode::RuleViolation,
             "triangle certificate failed on a term pair");
    }
  Rat u2 = u.norm_bound() * u.norm_bound();
  Rat m2 = mu.norm_sq();
  for (const SimpleFunction::Term& t : h.terms()) {
    Vec z = u.apply(t.y, mu(t.cell));
    Vec mi = mu(t.cell);
    if (vec_norm_sq(z) > u2 * vec_norm_sq(t.y) * vec_norm_sq(mi))
      fail(ErrorCode::RuleViolation,
           "operator bound certificate failed on a term");
    Rat v = mu.base()(t.cell);
    if (vec_norm_sq(mi) > m2 * v * v)
      fail(ErrorCode::RuleViolation,
           "measure bound certificate failed on a term");
  }
}

}  // namespace prering
