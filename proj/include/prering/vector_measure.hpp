#pragma once

#include <string>
#include <vector>

#include "prering/measure.hpp"
#include "prering/simple_function.hpp"
#include "prering/vec.hpp"

namespace prering {

// Bounded bilinear pairing u : Y x Z -> W used by the trilinear integral.
// All three kinds have operator norm exactly 1.
class BilinearOp {
 public:
  enum class Kind { kScalarMultiply, kComponentwise, kDotProduct };

  explicit BilinearOp(Kind kind) : kind_(kind) {}
  // Names: "scalar-multiply", "componentwise", "dot-product".
  static BilinearOp from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const char* name() const;

  // Result dimension for given argument dimensions; errors on shapes the
  // kind cannot pair.
  int result_dim(int ydim, int zdim) const;

  Vec apply(const Vec& y, const Vec& z) const;

  // Least m with |u(y,z)| <= m |y| |z|.
  Rat norm_bound() const { return Rat(1); }

 private:
  Kind kind_;
};

// Z-valued measure represented by a piecewise-constant density against a
// base positive measure: mu(A) = sum_j d_j v(A meet G_j) over a disjoint
// grid, or mu(A) = d v(A) for a constant density. This representation
// gives exact additivity, exact |mu|-norm, and exact variation.
class VectorMeasure {
 public:
  static VectorMeasure constant(Vec density, Measure base);
  static VectorMeasure piecewise(std::vector<SimpleFunction::Term> grid,
                                 Measure base);

  int zdim() const { return zdim_; }
  const Measure& base() const { return base_; }
  bool is_constant() const { return constant_; }
  const Vec& constant_density() const { return const_density_; }
  const std::vector<SimpleFunction::Term>& grid() const { return grid_; }

  Vec operator()(const Cell& a) const;
  Vec on_simple(const SimpleSet& s) const;

  // Least m with |mu(A)| <= m v(A): the largest density norm. The square
  // is rational; the norm itself is a radical.
  Rat norm_sq() const;
  Radical norm() const;

 private:
  VectorMeasure(Measure base, int zdim)
      : base_(std::move(base)), zdim_(zdim) {}
  Measure base_;
  int zdim_;
  bool constant_ = false;
  Vec const_density_;
  std::vector<SimpleFunction::Term> grid_;
};

// Trilinear elementary integral: sum of u(y_i, mu(A_i)).
Vec trilinear_integral(const BilinearOp& u, const SimpleFunction& h,
                       const VectorMeasure& mu);

// Lower bound for the variation |mu|(a) from a partition of a. Depth 0
// uses the trivial partition {a}; depth >= 1 resolves the density grid,
// which is exact for piecewise-constant densities. Nondecreasing in depth.
Radical variation(const VectorMeasure& mu, const Cell& a, int depth);

// The completed measure on a simple set: sum of mu over the cells.
Vec completion_on_simple(const VectorMeasure& mu, const SimpleSet& s);

// Exact certificate for |trilinear_integral| <= |u| seminorm(h) |mu|:
// termwise |u(y_i, mu(A_i))|^2 <= |y_i|^2 |mu(A_i)|^2 and
// |mu(A_i)|^2 <= |mu|^2 v(A_i)^2, plus pairwise Cauchy-Schwarz for the
// triangle step, all decided in rational squares. Throws RuleViolation
// when a step fails.
void check_trilinear_norm_bound(const BilinearOp& u, const SimpleFunction& h,
                                const VectorMeasure& mu);

}  // namespace prering
