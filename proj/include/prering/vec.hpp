#pragma once

#include <string>
#include <vector>

#include "prering/radical.hpp"
#include "prering/rational.hpp"

namespace prering {

// Value space for simple functions and vector measures: a rational
// coordinate space with the Euclidean norm. Norms are irrational in
// general, so comparisons run on norm squares or through Radical.
using Vec = std::vector<Rat>;

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Rat& c, const Vec& a);
Rat vec_dot(const Vec& a, const Vec& b);
Rat vec_norm_sq(const Vec& a);
bool vec_is_zero(const Vec& a);
Vec vec_zero(int dim);

// Euclidean norm as an exact radical value.
Radical vec_norm(const Vec& a);

std::string format_vec(const Vec& a);

}  // namespace prering
