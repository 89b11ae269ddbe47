#pragma once

#include "prering/rational.hpp"

namespace prering {

// Fixed-precision evaluation kernel for the non-rational functions the
// descriptor grammar admits (sqrt, sin, cos, pi). Everything is exact
// rational arithmetic with directed rounding and certified truncation,
// so results are deterministic across platforms and runs.
//
// Guarantees:
//   sqrt_down/sqrt_up bracket the true root on the 10^-digits grid.
//   |sin_dec(x,d) - sin(x)| <= 10^-d, same for cos_dec.
//   |pi_dec(d) - pi| <= 10^-d.

Rat pi_dec(unsigned digits);

// Largest grid point <= sqrt(x); x >= 0.
Rat sqrt_down(const Rat& x, unsigned digits);
// Smallest grid point >= sqrt(x); x >= 0.
Rat sqrt_up(const Rat& x, unsigned digits);

Rat sin_dec(const Rat& x, unsigned digits);
Rat cos_dec(const Rat& x, unsigned digits);

// Default precision for decimal-mode oracles; overridable through the
// CLI environment variable documented in docs/cli.md.
unsigned default_decimal_digits();
void set_default_decimal_digits(unsigned digits);

}  // namespace prering
