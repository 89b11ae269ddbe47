#include "prering/radical.hpp"

#include <sstream>
#include <stdexcept>

namespace prering {

namespace {

// sqrt(p/q) = (s / q) * sqrt(m) with p*q = s^2 * m, m square-reduced.
void reduce_radicand(const Rat& r, Rat* radicand, Rat* factor) {
  if (r == 0) {
    *radicand = 0;
    *factor = 0;
    return;
  }
  Int n = num(r) * den(r);
  Int s = square_part(n);
  *radicand = Rat(n / (s * s));
  *factor = Rat(s, den(r));
}

}  // namespace

Radical Radical::from_rat(const Rat& r) {
  Radical out;
  out.add_term(Rat(1), r);
  return out;
}

Radical Radical::sqrt_term(const Rat& r, const Rat& coeff) {
  if (r < 0) throw std::invalid_argument("Radical::sqrt_term: negative radicand");
  Radical out;
  if (r == 0 || coeff == 0) return out;
  Rat radicand, factor;
  reduce_radicand(r, &radicand, &factor);
  out.add_term(radicand, coeff * factor);
  return out;
}

void Radical::add_term(const Rat& radicand, const Rat& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Radical& Radical::operator+=(const Radical& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, c);
  return *this;
}

Radical& Radical::operator-=(const Radical& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, Rat(-c));
  return *this;
}

Radical Radical::scaled(const Rat& c) const {
  Radical out;
  if (c == 0) return out;
  for (const auto& [r, k] : terms_) out.terms_.emplace(r, Rat(k * c));
  return out;
}

bool Radical::is_rational() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == 1;
}

Rat Radical::rational_value() const {
  if (terms_.empty()) return Rat(0);
  if (!is_rational()) throw std::logic_error("Radical: not rational");
  return terms_.begin()->second;
}

Rat Radical::lower(unsigned digits) const {
  Rat acc(0);
  Int scale = pow10(digits);
  for (const auto& [r, c] : terms_) {
    if (r == 1) {
      acc += c;
      continue;
    }
    // c * sqrt(r): directed bound depends on the sign of c.
    Int n = num(r) * den(r);
    Rat root_lo = Rat(floor_div(isqrt_floor(n * scale * scale), den(r)), scale);
    Rat root_hi = root_lo * root_lo == r ? root_lo : Rat(root_lo + Rat(1, scale));
    acc += c > 0 ? c * root_lo : c * root_hi;
  }
  return acc;
}

Rat Radical::upper(unsigned digits) const {
  Rat acc(0);
  Int scale = pow10(digits);
  for (const auto& [r, c] : terms_) {
    if (r == 1) {
      acc += c;
      continue;
    }
    Int n = num(r) * den(r);
    Rat root_lo = Rat(floor_div(isqrt_floor(n * scale * scale), den(r)), scale);
    Rat root_hi = root_lo * root_lo == r ? root_lo : Rat(root_lo + Rat(1, scale));
    acc += c > 0 ? c * root_hi : c * root_lo;
  }
  return acc;
}

int Radical::compare(const Radical& a, const Radical& b) {
  if (a == b) return 0;
  Radical d = a - b;
  if (d.is_zero()) return 0;
  for (unsigned digits = 8; digits <= 512; digits *= 2) {
    if (d.lower(digits) > 0) return 1;
    if (d.upper(digits) < 0) return -1;
  }
  throw std::runtime_error(
      "Radical::compare: unresolved comparison beyond precision cap");
}

std::string Radical::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (r == 1) {
      os << format_rat(c);
    } else {
      os << format_rat(c) << "*sqrt(" << format_rat(r) << ")";
    }
  }
  return os.str();
}

bool leq_sqrt(const Rat& a, const Rat& b2) {
  if (b2 < 0) throw std::invalid_argument("leq_sqrt: negative square");
  if (a <= 0) return true;
  return a * a <= b2;
}

}  // namespace prering
