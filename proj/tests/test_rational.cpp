#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ahmes/rational.hpp"
#include "doctest.h"

using namespace ahmes;

TEST_CASE("arithmetic is exact") {
  Rat a(355, 113), b(-7, 3);
  CHECK((a + b) - b == a);
  CHECK((a * b) / b == a);
  Rat half(2, 4);
  half.canonicalize();  // raw numerator/denominator pairs are not reduced
  CHECK(half == Rat(1, 2));
  CHECK(Rat(1, 3).get_den() == 3);
}

TEST_CASE("parse and serialize round-trip") {
  for (const char* s : {"3/4", "-7/12", "0", "123456789123456789/2"}) {
    Rat q = parse_rat(s);
    CHECK(parse_rat(q.get_str()) == q);
  }
  CHECK(parse_rat("6/8") == Rat(3, 4));
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
}

TEST_CASE("floor ceil trunc") {
  CHECK(floor_rat(Rat(7, 2)) == 3);
  CHECK(floor_rat(Rat(-7, 2)) == -4);
  CHECK(ceil_rat(Rat(7, 2)) == 4);
  CHECK(ceil_rat(Rat(-7, 2)) == -3);
  CHECK(floor_rat(Rat(4)) == 4);
}

TEST_CASE("trunc_to_multiple stays within one multiple, toward zero") {
  Int m(7);
  for (long num = -100; num <= 100; num += 3) {
    Rat x(num, 4);
    Int r = trunc_to_multiple(x, m);
    CHECK(r % m == 0);
    CHECK(abs(Rat(r) - x) < Rat(m));
    CHECK(abs(Rat(r)) <= abs(x));
  }
  CHECK(trunc_to_multiple(Rat(13), Int(7)) == 7);
  CHECK(trunc_to_multiple(Rat(-13), Int(7)) == -7);
}

TEST_CASE("isqrt and bit_length") {
  CHECK(isqrt(Int(120)) == 10);
  CHECK(isqrt(Int(121)) == 11);
  CHECK(isqrt(Int(0)) == 0);
  CHECK(bit_length(Int(1)) == 1);
  CHECK(bit_length(Int(255)) == 8);
  CHECK(bit_length(Int(256)) == 9);
}

TEST_CASE("decimal rendering") {
  CHECK(decimal_render(Rat(3, 4), 5, Round::TowardZero) == "0.75000");
  CHECK(decimal_render(Rat(1, 3), 5, Round::TowardZero) == "0.33333");
  CHECK(decimal_render(Rat(1, 3), 5, Round::Up) == "0.33334");
  CHECK(decimal_render(Rat(2, 3), 4, Round::Down) == "0.6666");
  CHECK(decimal_render(Rat(-1, 3), 3, Round::TowardZero) == "-0.333");
}

TEST_CASE("floor of a power of two with fractional exponent") {
  CHECK(floor_pow2(Rat(3)) == 8);
  CHECK(floor_pow2(Rat(1, 2)) == 1);   // 2^0.5 = 1.414...
  CHECK(floor_pow2(Rat(7, 2)) == 11);  // 2^3.5 = 11.31...
  // certified against squaring: f = floor(2^(p/q)) iff f^q <= 2^p < (f+1)^q
  for (long p = 1; p <= 40; p += 3)
    for (long q = 2; q <= 5; ++q) {
      Int f = floor_pow2(Rat(p, q));
      Int two_p = Int(1) << p;
      Int lo = 1, hi = 1;
      for (long i = 0; i < q; ++i) lo *= f, hi *= f + 1;
      CHECK(lo <= two_p);
      CHECK(two_p < hi);
    }
}

TEST_CASE("floor of 2^2^sqrt(k) matches the bit-length sanity bound") {
  for (long k : {1L, 2L, 4L, 9L, 25L, 100L}) {
    Int v = floor_pow2_pow2_sqrt(k);
    // exact when sqrt(k) is an integer
    Int sq = isqrt(Int(k));
    if (sq * sq == k) {
      Int expect = Int(1) << (1L << sq.get_si());
      CHECK(v == expect);
    }
    CHECK(v >= 1);
  }
  CHECK(floor_pow2_pow2_sqrt(2) == 6);  // 2^(2^1.414...) = 6.34...
}
