#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace prering {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Parses "p", "-p", "p/q", "-p/q" with q > 0 after normalization.
// Returns nullopt on syntax errors or zero denominator.
std::optional<Rat> parse_rat(std::string_view s);

// Canonical form: "p" for integers, "p/q" otherwise; q always positive.
std::string format_rat(const Rat& r);

// Fixed-point decimal rendering with the given fractional digit count,
// rounding toward zero. Used only for human-facing report fields.
std::string format_decimal(const Rat& r, unsigned digits);

Rat pow_rat(const Rat& base, unsigned exp);
Int pow2(unsigned exp);
Int pow10(unsigned exp);

// Floor division for b > 0.
Int floor_div(const Int& a, const Int& b);

Int floor_to_int(const Rat& r);
Rat abs_rat(const Rat& r);

// floor(x * denom) / denom; exact directed rounding onto a fixed grid.
Rat round_down_to_grid(const Rat& x, const Int& denom);

// Floor of the square root; n must be nonnegative.
Int isqrt_floor(const Int& n);

bool is_perfect_square(const Int& n, Int* root = nullptr);

// Largest s with s^2 | n, by perfect-square detection plus small-prime
// trial division. Complete for smooth inputs; for rough inputs it still
// returns a valid (possibly partial) square part, which keeps callers
// sound because they only rely on s^2 | n.
Int square_part(const Int& n);

}  // namespace prering
