#include "prering/dyadic.hpp"

#include <cstddef>

#include "prering/errors.hpp"

namespace prering {

namespace {

void poly_trim_local(std::vector<Rat>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

}  // namespace

std::vector<Rat> poly_multiply(const std::vector<Rat>& a,
                               const std::vector<Rat>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  poly_trim_local(out);
  return out;
}

std::vector<Rat> poly_compose_affine(const std::vector<Rat>& p, const Rat& a,
                                     const Rat& w) {
  // Horner: result = ((c_n (a+wt) + c_{n-1}) (a+wt) + ...).
  std::vector<Rat> out;
  for (size_t i = p.size(); i-- > 0;) {
    std::vector<Rat> next(out.size() + 1, Rat(0));
    for (size_t j = 0; j < out.size(); ++j) {
      next[j] += out[j] * a;
      next[j + 1] += out[j] * w;
    }
    if (next.empty()) next.push_back(Rat(0));
    next[0] += p[i];
    poly_trim_local(next);
    out = std::move(next);
  }
  return out;
}

Rat poly_eval(const std::vector<Rat>& p, const Rat& x) {
  Rat acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

Rat poly_derivative_bound(const std::vector<Rat>& p, const Rat& lo,
                          const Rat& hi) {
  Rat r = abs_rat(lo);
  if (abs_rat(hi) > r) r = abs_rat(hi);
  Rat bound(0);
  Rat rpow(1);
  for (size_t i = 1; i < p.size(); ++i) {
    bound += Rat(i) * abs_rat(p[i]) * rpow;
    rpow *= r;
  }
  return bound;
}

Rat sum_poly_prefix(const std::vector<Rat>& p, const Int& N) {
  if (N <= 0 || p.empty()) return Rat(0);
  const size_t d = p.size() - 1;
  // Stirling numbers of the second kind S(j,i), so that
  // k^j = sum_i S(j,i) i! C(k,i).
  std::vector<std::vector<Int>> stirling(d + 1, std::vector<Int>(d + 1, 0));
  stirling[0][0] = 1;
  for (size_t j = 1; j <= d; ++j)
    for (size_t i = 1; i <= j; ++i)
      stirling[j][i] = stirling[j - 1][i - 1] + Int(i) * stirling[j - 1][i];
  // binom[i] = C(N, i+1), built incrementally; exact integer division is
  // avoided by staying rational.
  std::vector<Rat> binom(d + 1);
  Rat c(N);
  binom[0] = c;
  for (size_t i = 1; i <= d; ++i) {
    Int num = N - Int(i);
    Int den = Int(i) + 1;
    c = c * Rat(num) / Rat(den);
    binom[i] = c;
  }
  std::vector<Rat> fact(d + 1, Rat(1));
  for (size_t i = 1; i <= d; ++i) fact[i] = fact[i - 1] * Rat(Int(i));
  Rat total(0);
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0) continue;
    Rat sum_kj(0);
    if (j == 0) {
      sum_kj = Rat(N);
    } else {
      for (size_t i = 1; i <= j; ++i)
        sum_kj += Rat(stirling[j][i]) * fact[i] * binom[i];
    }
    total += p[j] * sum_kj;
  }
  return total;
}

Rat dyadic_poly_sum(const std::vector<Rat>& f, const std::vector<Rat>& g,
                    const Rat& a, const Rat& b, int level,
                    bool right_samples) {
  if (level < 0 || level > 512) throw Error(ErrorCode::BadInput,
                                            "dyadic level out of range");
  if (b <= a) return Rat(0);
  Int N = pow2(static_cast<unsigned>(level));
  Rat w = (b - a) / Rat(N);
  // P(k) = f(a + w k) or f(a + w (k+1)); Q(k) = g(a + w (k+1)) - g(a + w k).
  std::vector<Rat> P =
      poly_compose_affine(f, right_samples ? a + w : a, w);
  std::vector<Rat> g_left = poly_compose_affine(g, a, w);
  std::vector<Rat> g_right = poly_compose_affine(g, a + w, w);
  if (g_left.size() < g_right.size()) g_left.resize(g_right.size(), Rat(0));
  if (g_right.size() < g_left.size()) g_right.resize(g_left.size(), Rat(0));
  std::vector<Rat> Q(g_left.size());
  for (size_t i = 0; i < Q.size(); ++i) Q[i] = g_right[i] - g_left[i];
  poly_trim_local(Q);
  if (P.empty()) P.push_back(Rat(0));
  if (Q.empty()) return Rat(0);
  return sum_poly_prefix(poly_multiply(P, Q), N);
}

}  // namespace prering
