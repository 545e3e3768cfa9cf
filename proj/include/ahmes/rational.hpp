#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ahmes {

// The universal scalar: arbitrary-precision rational, always canonical
// (gcd(|num|,den)=1, den>=1).  mpq_class keeps this invariant for us as
// long as values are built through arithmetic; parse() canonicalizes.
using Rat = mpq_class;
using Int = mpz_class;

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

// Parses "p/q" or "p"; throws on zero denominator or junk.
Rat parse_rat(const std::string& text);

// Always renders with an explicit denominator, e.g. "3/4", "1/1", "-2/5".
std::string to_frac(const Rat& x);

Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);

// Nearest multiple of m to x, ties and overshoot resolved toward zero
// (so |result| <= |x| and |result - x| < m).  m > 0.
Int trunc_to_multiple(const Rat& x, const Int& m);

Rat pow_rat(const Rat& base, long exp);  // exp may be negative, base != 0

Int isqrt(const Int& n);    // floor square root, n >= 0
size_t bit_length(const Int& n);  // n >= 1

enum class Round { Down, Up, TowardZero, Nearest };

// Fixed-point decimal string with `digits` fractional digits; bit-exact
// across platforms (pure integer arithmetic).
std::string decimal_render(const Rat& x, int digits,
                           Round mode = Round::TowardZero);

// Certified floor(2^x) for rational x >= 0.  Uses directed-rounding MPFR
// internally and escalates precision until the floor is pinned down
// exactly; the result is therefore exact, not approximate.
Int floor_pow2(const Rat& x);

// Certified floor(2^(2^sqrt(k))) for integer k >= 1, same mechanism.
Int floor_pow2_pow2_sqrt(long k);

}  // namespace ahmes
