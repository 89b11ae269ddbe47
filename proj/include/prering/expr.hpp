#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prering/rational.hpp"

namespace prering {

// Minimal expression grammar for measure integrators and integrand
// oracles:
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := unary ('^' uint)?
//   unary   := '-' unary | primary
//   primary := number | 'x' | 'x1' | 'x2' | 'pi'
//            | ('abs'|'sqrt'|'sin'|'cos') '(' expr ')'
//            | ('min'|'max') '(' expr ',' expr ')'
//            | '(' expr ')'
//   number  := digits | digits '/' digits | digits '.' digits
//
// Expressions without sqrt/sin/cos/pi evaluate exactly over the
// rationals; the rest evaluate in decimal mode with |error| <= 10^-digits
// certified per evaluation.
class Expr {
 public:
  // Throws Error(BadInput) with a position message on syntax errors.
  static Expr parse(const std::string& source);

  const std::string& source() const { return source_; }

  // True when every node evaluates exactly over the rationals.
  bool exact() const;

  // Number of distinct variables referenced (0, 1 for x, 2 for x1/x2).
  int arity() const;

  // Exact evaluation; requires exact(). Division by zero reports
  // Error(OracleFailure).
  Rat eval_exact(const std::vector<Rat>& args) const;

  // Decimal-mode evaluation with certified absolute error <= 10^-digits.
  Rat eval_dec(const std::vector<Rat>& args, unsigned digits) const;

  // Evaluates exactly when possible, else in decimal mode.
  Rat eval(const std::vector<Rat>& args, unsigned digits) const;

  // Dense coefficient list c0..cn when the (single-variable) expression
  // is a polynomial with rational coefficients; nullopt otherwise.
  std::optional<std::vector<Rat>> polynomial() const;

  // Polynomial coefficients valid on [lo, hi]: abs/min/max applied to
  // affine subexpressions are eliminated exactly when their sign is
  // constant there, so piecewise-polynomial integrands reduce to
  // polynomials on root-free pieces.
  std::optional<std::vector<Rat>> polynomial_on(const Rat& lo,
                                                const Rat& hi) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace prering
