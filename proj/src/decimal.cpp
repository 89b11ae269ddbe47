#include "prering/decimal.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <mutex>

namespace prering {

namespace {

unsigned g_default_digits = 50;

// atan(1/x) for integer x >= 2 with truncation error <= 10^-(digits+2).
Rat atan_inv(unsigned x, unsigned digits) {
  Rat x2inv = Rat(1, Int(x) * x);
  Rat term(1, x);
  Rat acc = term;
  Rat cutoff(1, pow10(digits + 2));
  for (unsigned k = 1;; ++k) {
    term *= x2inv;
    Rat contrib = term / (2 * k + 1);
    if (contrib < cutoff) break;
    if (k & 1u)
      acc -= contrib;
    else
      acc += contrib;
  }
  return acc;
}

}  // namespace

Rat pi_dec(unsigned digits) {
  static std::map<unsigned, Rat> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(digits);
  if (it != cache.end()) return it->second;
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239). Both series alternate, so
  // the truncation error of each is below its cutoff; the combined error
  // stays under 20 * 10^-(digits+2) < 10^-digits.
  Rat pi = 16 * atan_inv(5, digits + 2) - 4 * atan_inv(239, digits + 2);
  pi = round_down_to_grid(pi, pow10(digits + 1));
  cache.emplace(digits, pi);
  return pi;
}

Rat sqrt_down(const Rat& x, unsigned digits) {
  if (x < 0) throw std::invalid_argument("sqrt_down: negative input");
  // floor(sqrt(p/q) * 10^d) = floor(isqrt(p*q*10^(2d)) / q).
  Int scale = pow10(digits);
  Int n = num(x) * den(x) * scale * scale;
  Int r = floor_div(isqrt_floor(n), den(x));
  return Rat(r, scale);
}

Rat sqrt_up(const Rat& x, unsigned digits) {
  Rat lo = sqrt_down(x, digits);
  if (lo * lo == x) return lo;
  return lo + Rat(1, pow10(digits));
}

namespace {

using boost::multiprecision::int512_t;

// Floor division, divisor > 0.
int512_t fdiv512(const int512_t& a, const int512_t& b) {
  int512_t q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r < 0) --q;
  return q;
}

// floor(2 pi 10^dg) and floor(pi 10^k), cached as plain integers so the
// hot path never touches rational arithmetic.
const Int& two_pi_units(unsigned dg) {
  static std::map<unsigned, Int> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dg);
  if (it == cache.end())
    it = cache.emplace(dg, floor_to_int(2 * pi_dec(dg) * pow10(dg))).first;
  return it->second;
}

// floor(pi 2^ks); the pi error of 10^-(ks/3) keeps the result within two
// grid units of pi 2^ks.
const Int& pi_units_bin(unsigned ks) {
  static std::map<unsigned, Int> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(ks);
  if (it == cache.end())
    it = cache.emplace(ks, floor_to_int(pi_dec(ks / 3 + 2) * pow2(ks))).first;
  return it->second;
}

const Int& pi_units_dec(unsigned k) {
  static std::map<unsigned, Int> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end())
    it = cache.emplace(k, floor_to_int(pi_dec(k) * pow10(k))).first;
  return it->second;
}

unsigned bit_width(const Int& v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(v))) + 1;
}

// Alternating Taylor sum of sin on a grid of S units per 1, with
// |R| <= floor(pi*S)/2 + 2. Every iteration truncates twice toward zero
// (or toward minus infinity for shifts) and the truncated term feeds the
// next one with a contraction factor below 1/2, so the total error stays
// under 70 grid units. When `shift` is nonzero, S = 2^shift and the grid
// divisions become shifts.
Int sin_taylor_units(const Int& R, const Int& S, unsigned shift) {
  if (shift != 0 && shift <= 60) {
    // |R| < 1.6 * 2^60 and |term * r2| < 2^124, so __int128 suffices.
    __int128 r = R.convert_to<long long>();
    __int128 r2 = (r * r) >> shift;
    __int128 acc = r;
    __int128 term = r;
    for (int k = 1; k <= 60; ++k) {
      term = (term * r2) >> shift;
      term /= static_cast<__int128>(2 * k) * (2 * k + 1);
      if (term == 0) break;
      if (k & 1)
        acc -= term;
      else
        acc += term;
    }
    return Int(static_cast<long long>(acc));
  }
  int512_t s(S);
  int512_t r(R);
  int512_t r2 = r * r / s;
  int512_t acc = r;
  int512_t term = r;
  for (int k = 1; k <= 400; ++k) {
    term = term * r2 / s;
    term /= int512_t(2 * k) * (2 * k + 1);
    if (term == 0) break;
    if (k & 1)
      acc -= term;
    else
      acc += term;
  }
  return Int(acc);
}

// Rational-arithmetic fallback for operand sizes the fixed-width path
// cannot certify. sin on |r| <= pi/2 + slack by the alternating Taylor
// series; the input is first snapped onto a coarse grid so the exact
// powers stay small, costing at most 10^-(digits+3).
Rat sin_core_rational(const Rat& r, unsigned digits) {
  Int grid = pow10(digits + 3);
  Rat x = round_down_to_grid(r, grid);
  Rat x2 = x * x;
  Rat term = x;
  Rat acc = x;
  Rat cutoff(1, pow10(digits + 2));
  for (unsigned k = 1; k < 400; ++k) {
    term *= x2;
    term /= Int(2 * k) * Int(2 * k + 1);
    if (abs_rat(term) < cutoff) break;
    if (k & 1u)
      acc -= term;
    else
      acc += term;
    // Keep denominators bounded; each snap adds <= 1/grid to the budget.
    acc = round_down_to_grid(acc, grid);
  }
  return acc;
}

Rat sin_dec_rational(const Rat& x, const Rat& pi, unsigned digits) {
  Rat two_pi = 2 * pi;
  Int m = floor_to_int(Rat(x / two_pi + Rat(1, 2)));
  Rat r = x - Rat(m) * two_pi;  // r in [-pi, pi] up to grid slack
  if (r > pi / 2) {
    r = pi - r;  // sin(r) = sin(pi - r)
  } else if (r < -pi / 2) {
    r = -pi - r;  // sin(r) = sin(-pi - r)
  }
  return sin_core_rational(r, digits);
}

}  // namespace

Rat sin_dec(const Rat& x, unsigned digits) {
  // Argument reduction needs pi sharp enough that m * |pi_hat - pi| is
  // negligible; size the guard from the magnitude of x. With |x| < 10^mag
  // the reduction count m is below 10^mag / 6, so the W error contributes
  // m * 3 * 10^-(digits + mag + 6) < 10^-(digits + 5).
  unsigned guard = 5;
  {
    Int an = abs(num(x));
    for (Int t = den(x) * 10; t < an; t *= 10) ++guard;
  }
  unsigned dg = digits + guard + 1;
  unsigned bits_t = (dg * 10) / 3 + 2;
  unsigned bits_s = ((digits + 3) * 10) / 3 + 2;
  unsigned bits_p = bit_width(num(x));
  unsigned bits_q = bit_width(den(x));
  if (digits > 60 || bits_p + bits_t + bits_s + 10 > 500 ||
      bits_q + bits_t + bits_s + 10 > 500) {
    return sin_dec_rational(x, pi_dec(digits + guard + 5), digits);
  }
  // Fixed-width integer path. With T = 10^dg and W = floor(2 pi T):
  //   m = round(x T / W), then R = floor((x - m W / T) * S) on a Taylor
  // grid of S units per 1; reduction and fold cost a few grid units.
  // The grid is binary when the Taylor kernel can run in __int128.
  unsigned ks = ((digits + 3) * 10 + 2) / 3;
  bool binary_grid = ks <= 60;
  Int T = pow10(dg);
  const Int& W = two_pi_units(dg);
  Int S = binary_grid ? pow2(ks) : pow10(digits + 3);
  int512_t pt = int512_t(num(x)) * int512_t(T);
  int512_t qw = int512_t(den(x)) * int512_t(W);
  // With m = round(pt / qw), the reduced argument times Q T is
  // pt - m qw = (rem - qw) / 2 where rem is the floor-mod of 2 pt + qw
  // by 2 qw; this needs one division and no multiply-back.
  int512_t q512, rem;
  boost::multiprecision::divide_qr(2 * pt + qw, 2 * qw, q512, rem);
  if (rem < 0) rem += 2 * qw;
  int512_t rqt = (rem - qw) >> 1;
  int512_t r5 =
      fdiv512(rqt * int512_t(S), int512_t(den(x)) * int512_t(T));
  Int R(r5);
  const Int& pi_s = binary_grid ? pi_units_bin(ks) : pi_units_dec(digits + 3);
  if (2 * R > pi_s) {
    R = pi_s - R;  // sin(r) = sin(pi - r)
  } else if (2 * R < -pi_s) {
    R = -pi_s - R;  // sin(r) = sin(-pi - r)
  }
  return Rat(sin_taylor_units(R, S, binary_grid ? ks : 0), S);
}

Rat cos_dec(const Rat& x, unsigned digits) {
  return sin_dec(x + pi_dec(digits + 10) / 2, digits);
}

unsigned default_decimal_digits() { return g_default_digits; }
void set_default_decimal_digits(unsigned digits) { g_default_digits = digits; }

}  // namespace prering
