#pragma once

#include <cstdint>
#include <vector>

#include "prering/rational.hpp"

namespace prering {

// splitmix64: tiny, fully specified, identical on every platform.
// Standard-library engines are portable but the distributions are not,
// and byte-stable reports are part of the CLI contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); bound > 0. Modulo bias is irrelevant for the
  // small bounds used here (< 2^32).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  bool coin() { return (next() & 1u) != 0; }

  // Rational with numerator in [-mag, mag] and denominator in [1, maxden].
  Rat rat(unsigned mag, unsigned maxden) {
    std::int64_t n = static_cast<std::int64_t>(below(2 * mag + 1)) -
                     static_cast<std::int64_t>(mag);
    std::uint64_t d = 1 + below(maxden);
    return Rat(Int(n), Int(d));
  }

  // Rational uniform-ish inside [lo, hi] on a grid of `steps` points.
  Rat rat_in(const Rat& lo, const Rat& hi, unsigned steps = 4096) {
    Rat t(Int(below(steps + 1)), Int(steps));
    return lo + (hi - lo) * t;
  }

  // Derives an independent stream; tag keeps sub-streams reproducible
  // regardless of call order elsewhere.
  Rng fork(std::uint64_t tag) const {
    Rng r(state_ ^ (0xa0761d6478bd642full * (tag + 1)));
    r.next();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace prering
