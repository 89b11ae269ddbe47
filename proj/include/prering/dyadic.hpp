#pragma once

#include <vector>

#include "prering/rational.hpp"

namespace prering {

// Dense-coefficient polynomial helpers over the rationals (index =
// power). Used by the closed-form dyadic summation that lets deep
// partition levels (2^30+ cells) be integrated exactly without
// materializing cells.

std::vector<Rat> poly_multiply(const std::vector<Rat>& a,
                               const std::vector<Rat>& b);

// p(a + w t) expanded as a polynomial in t.
std::vector<Rat> poly_compose_affine(const std::vector<Rat>& p, const Rat& a,
                                     const Rat& w);

Rat poly_eval(const std::vector<Rat>& p, const Rat& x);

// Upper bound for |p'| on [lo, hi]: sum of i |c_i| R^(i-1) with
// R = max(|lo|, |hi|).
Rat poly_derivative_bound(const std::vector<Rat>& p, const Rat& lo,
                          const Rat& hi);

// Exact sum of p(k) over k = 0 .. N-1 via the binomial basis:
// k^j expands in falling factorials and sum_{k<N} C(k,i) = C(N,i+1).
Rat sum_poly_prefix(const std::vector<Rat>& p, const Int& N);

// Exact integral of the level-L dyadic step approximation of a
// polynomial integrand f against a measure with polynomial primitive g:
// partition [a,b] into N = 2^L equal cells, sample f at the left (right
// when right_samples) endpoint of each cell, weight by the g-increment.
Rat dyadic_poly_sum(const std::vector<Rat>& f, const std::vector<Rat>& g,
                    const Rat& a, const Rat& b, int level, bool right_samples);

}  // namespace prering
