#include "prering/vec.hpp"

#include "prering/errors.hpp"

namespace prering {

namespace {
void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    fail(ErrorCode::DimensionMismatch,
         "vector dimensions differ: " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()));
}
}  // namespace

Vec vec_add(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_scale(const Rat& c, const Vec& a) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

Rat vec_dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat vec_norm_sq(const Vec& a) { return vec_dot(a, a); }

bool vec_is_zero(const Vec& a) {
  for (const Rat& x : a)
    if (x != 0) return false;
  return true;
}

Vec vec_zero(int dim) { return Vec(size_t(dim), Rat(0)); }

Radical vec_norm(const Vec& a) { return Radical::sqrt_term(vec_norm_sq(a)); }

std::string format_vec(const Vec& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += format_rat(a[i]);
  }
  return s + ")";
}

}  // namespace prering
