#pragma once

#include <map>
#include <string>

#include "prering/rational.hpp"

namespace prering {

// Exact arithmetic on numbers of the form sum_i c_i * sqrt(r_i) with
// rational c_i and nonnegative rational radicands r_i. These appear as
// Euclidean norms and seminorms of vector-valued simple functions, where
// the tests need exact equality across representations and exact <=.
//
// Canonical form: radicands are pairwise distinct after extracting the
// square part of numerator*denominator; the radicand 1 carries the
// rational component; zero coefficients are dropped.
class Radical {
 public:
  Radical() = default;

  static Radical from_rat(const Rat& r);
  // c * sqrt(r); r >= 0.
  static Radical sqrt_term(const Rat& r, const Rat& coeff = Rat(1));

  Radical& operator+=(const Radical& o);
  Radical& operator-=(const Radical& o);
  friend Radical operator+(Radical a, const Radical& b) { return a += b; }
  friend Radical operator-(Radical a, const Radical& b) { return a -= b; }
  Radical scaled(const Rat& c) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  // Valid only when is_rational().
  Rat rational_value() const;

  // Exact equality of canonical forms. Complete whenever radicand
  // dependencies are within reach of square_part (always true for the
  // corpora here, where equal values share literal radicands).
  bool operator==(const Radical& o) const { return terms_ == o.terms_; }

  // Directed rational brackets: lower <= value <= upper, gap <= 10^-digits
  // per term.
  Rat lower(unsigned digits) const;
  Rat upper(unsigned digits) const;

  // Exact three-way comparison: -1, 0, +1. Resolves by canonical equality
  // first, then by bracket refinement. Throws std::runtime_error if the
  // brackets fail to separate at the precision cap and the canonical
  // difference is nonzero (not reachable for square-free-reduced inputs).
  static int compare(const Radical& a, const Radical& b);

  const std::map<Rat, Rat>& terms() const { return terms_; }

  std::string to_string() const;

 private:
  std::map<Rat, Rat> terms_;  // canonical radicand -> coefficient
  void add_term(const Rat& radicand, const Rat& coeff);
};

// Exact decision of a <= sqrt(b2) for rational a and b2 >= 0:
// true iff a <= 0 or a^2 <= b2. Building block for norm-bound checks
// that must avoid roots entirely.
bool leq_sqrt(const Rat& a, const Rat& b2);

}  // namespace prering
