#include "ahmes/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <functional>

namespace ahmes {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw Error("ParseError", "empty rational");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' &&
        c != '+')
      throw Error("ParseError", "bad character in rational '" + text + "'");
  }
  Rat q;
  if (q.set_str(text, 10) != 0)
    throw Error("ParseError", "cannot parse rational '" + text + "'");
  if (q.get_den() == 0) throw Error("ParseError", "zero denominator");
  q.canonicalize();
  return q;
}

std::string to_frac(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

Int trunc_to_multiple(const Rat& x, const Int& m) {
  if (m <= 0) throw Error("BadArgument", "trunc_to_multiple needs m > 0");
  Int q;
  Int den = x.get_den() * m;
  mpz_tdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), den.get_mpz_t());
  return q * m;
}

Rat pow_rat(const Rat& base, long exp) {
  if (exp == 0) return 1;
  bool inv = exp < 0;
  unsigned long e = inv ? -static_cast<unsigned long>(exp) : exp;
  if (inv && base == 0) throw Error("BadArgument", "0 to negative power");
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  Rat r(num, den);
  r.canonicalize();
  if (inv) r = 1 / r;
  return r;
}

Int isqrt(const Int& n) {
  if (n < 0) throw Error("BadArgument", "isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

size_t bit_length(const Int& n) {
  if (n < 1) throw Error("BadArgument", "bit_length needs n >= 1");
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

std::string decimal_render(const Rat& x, int digits, Round mode) {
  if (digits < 1) throw Error("BadArgument", "digits must be >= 1");
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  Rat scaled = x * Rat(scale);
  Int n;
  switch (mode) {
    case Round::Down:
      n = floor_rat(scaled);
      break;
    case Round::Up:
      n = ceil_rat(scaled);
      break;
    case Round::TowardZero:
      mpz_tdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(),
                 scaled.get_den().get_mpz_t());
      break;
    case Round::Nearest:
      n = floor_rat(scaled + Rat(1, 2));
      break;
  }
  bool neg = n < 0;
  Int a = abs(n);
  Int ip = a / scale, fp = a % scale;
  std::string frac = fp.get_str();
  frac.insert(0, digits - frac.size(), '0');
  return (neg ? "-" : "") + ip.get_str() + "." + frac;
}

namespace {

// floor of 2^x from a certified [xlo, xhi] mpfr enclosure of the exponent.
// Escalates working precision until both directed bounds share a floor.
Int floor_pow2_enclosed(const std::function<void(mpfr_t, mpfr_rnd_t)>& set_x) {
  for (mpfr_prec_t prec = 128; prec <= 1 << 22; prec *= 2) {
    mpfr_t xlo, xhi, lo, hi;
    mpfr_inits2(prec, xlo, xhi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    set_x(xlo, MPFR_RNDD);
    set_x(xhi, MPFR_RNDU);
    mpfr_exp2(lo, xlo, MPFR_RNDD);
    mpfr_exp2(hi, xhi, MPFR_RNDU);
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
    Int flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDN);
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDN);
    mpfr_clears(xlo, xhi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (flo == fhi) return flo;
  }
  throw Error("NoConvergence", "floor_pow2 precision cap exhausted");
}

}  // namespace

Int floor_pow2(const Rat& x) {
  if (x < 0) throw Error("BadArgument", "floor_pow2 needs x >= 0");
  return floor_pow2_enclosed([&x](mpfr_t out, mpfr_rnd_t rnd) {
    mpfr_set_q(out, x.get_mpq_t(), rnd);
  });
}

Int floor_pow2_pow2_sqrt(long k) {
  if (k < 1) throw Error("BadArgument", "k >= 1 required");
  return floor_pow2_enclosed([k](mpfr_t out, mpfr_rnd_t rnd) {
    mpfr_sqrt_ui(out, static_cast<unsigned long>(k), rnd);
    mpfr_exp2(out, out, rnd);
  });
}

}  // namespace ahmes
