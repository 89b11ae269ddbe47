#pragma once

#include <vector>

#include "prering/cell.hpp"
#include "prering/measure.hpp"
#include "prering/vec.hpp"

namespace prering {

// A simple function: finite sum of vector values times cell indicators,
// stored in disjoint form. Value space is a fixed rational coordinate
// space of dimension vdim with the Euclidean norm.
class SimpleFunction {
 public:
  struct Term {
    Vec y;
    Cell cell;
  };

  // Zero function on a domain of the given dimensions.
  SimpleFunction(int dims, int vdim);

  // Builds the disjoint representation from possibly overlapping terms:
  // refines the cells and sums values on each piece, so evaluation agrees
  // pointwise with the summed input. Zero-valued pieces are dropped.
  static SimpleFunction from_terms(int dims, int vdim,
                                   const std::vector<Term>& terms);

  int dims() const { return dims_; }
  int vdim() const { return vdim_; }
  const std::vector<Term>& terms() const { return terms_; }

  Vec eval(const std::vector<Rat>& x) const;
  Vec eval1(const Rat& x) const;

  bool is_zero() const { return terms_.empty(); }

  // Pointwise sum / scalar multiple, in disjoint form.
  SimpleFunction plus(const SimpleFunction& o) const;
  SimpleFunction scaled(const Rat& c) const;

 private:
  int dims_;
  int vdim_;
  std::vector<Term> terms_;
};

// Elementary integral: sum of y_i v(A_i) over the disjoint terms.
Vec integral(const SimpleFunction& h, const Measure& v);

// Seminorm: sum of |y_i| v(A_i); exact radical value.
Radical seminorm(const SimpleFunction& h, const Measure& v);

// Pointwise product g*f of a scalar simple function with a vector one;
// the result is again simple.
SimpleFunction pointwise_product(const SimpleFunction& g,
                                 const SimpleFunction& f);

// Pointwise max / min of scalar simple functions.
SimpleFunction pointwise_sup(const SimpleFunction& f, const SimpleFunction& g);
SimpleFunction pointwise_inf(const SimpleFunction& f, const SimpleFunction& g);

// Exact certificate for |integral(h, v)| <= seminorm(h, v): verifies the
// pairwise Cauchy-Schwarz inequalities <y_i, y_j> <= |y_i||y_j| in
// rational squares, which sum to the claimed bound. Throws RuleViolation
// if any certificate step fails (it cannot for valid inputs).
void check_integral_norm_bound(const SimpleFunction& h, const Measure& v);

}  // namespace prering
