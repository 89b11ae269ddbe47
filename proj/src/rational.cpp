#include "prering/rational.hpp"

#include <cctype>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace prering {

std::optional<Rat> parse_rat(std::string_view s) {
  auto parse_int = [](std::string_view t, Int* out) -> bool {
    if (t.empty()) return false;
    size_t i = 0;
    bool neg = false;
    if (t[0] == '-' || t[0] == '+') {
      neg = t[0] == '-';
      i = 1;
    }
    if (i == t.size()) return false;
    Int v = 0;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
      v = v * 10 + (t[i] - '0');
    }
    *out = neg ? Int(-v) : v;
    return true;
  };

  size_t slash = s.find('/');
  if (slash == std::string_view::npos) {
    Int p;
    if (!parse_int(s, &p)) return std::nullopt;
    return Rat(p);
  }
  Int p, q;
  if (!parse_int(s.substr(0, slash), &p)) return std::nullopt;
  if (!parse_int(s.substr(slash + 1), &q)) return std::nullopt;
  if (q == 0) return std::nullopt;
  return Rat(p, q);
}

std::string format_rat(const Rat& r) {
  Int n = num(r), d = den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

std::string format_decimal(const Rat& r, unsigned digits) {
  bool neg = r < 0;
  Rat a = neg ? Rat(-r) : r;
  Int scale = pow10(digits);
  Int scaled = floor_to_int(Rat(a * scale));
  Int ip = scaled / scale;
  Int fp = scaled % scale;
  std::string frac = fp.str();
  if (frac.size() < digits) frac.insert(0, digits - frac.size(), '0');
  std::string out = ip.str();
  if (digits > 0) out += "." + frac;
  if (neg && scaled != 0) out.insert(0, 1, '-');
  return out;
}

Rat pow_rat(const Rat& base, unsigned exp) {
  Rat acc(1);
  Rat b = base;
  unsigned e = exp;
  while (e) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

Int pow2(unsigned exp) { return Int(1) << exp; }

Int pow10(unsigned exp) {
  // Hot enough to memoize; exponents above the cap stay rare and large.
  constexpr unsigned kCacheCap = 512;
  if (exp <= kCacheCap) {
    static std::vector<Int> table{Int(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= exp) table.push_back(table.back() * 10);
    return table[exp];
  }
  Int acc(1), b(10);
  unsigned e = exp;
  while (e) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Int floor_to_int(const Rat& r) { return floor_div(num(r), den(r)); }

Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

Rat round_down_to_grid(const Rat& x, const Int& denom) {
  return Rat(floor_to_int(Rat(x * denom)), denom);
}

Int isqrt_floor(const Int& n) {
  if (n < 0) throw std::invalid_argument("isqrt_floor: negative input");
  return boost::multiprecision::sqrt(n);
}

bool is_perfect_square(const Int& n, Int* root) {
  if (n < 0) return false;
  Int r = isqrt_floor(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

Int square_part(const Int& n) {
  if (n <= 0) return 1;
  Int root;
  if (is_perfect_square(n, &root)) return root;
  Int rest = n, s = 1;
  static constexpr unsigned kSmallPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                              23, 29, 31, 37, 41, 43, 47};
  for (unsigned p : kSmallPrimes) {
    Int p2 = Int(p) * p;
    while (rest % p2 == 0) {
      rest /= p2;
      s *= p;
    }
  }
  if (is_perfect_square(rest, &root)) s *= root;
  return s;
}

}  // namespace prering
