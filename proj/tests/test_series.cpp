#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ahmes/series.hpp"
#include "doctest.h"

using namespace ahmes;

namespace {

TermSpec half_powers() {
  return {"half-powers",
          [](long n) -> Rat { return pow_rat(Rat(1, 2), n); },
          DecayCertificate{Rat(1, 2), 1},
          [](long n) -> Rat { return pow_rat(Rat(1, 2), n - 1); }};
}

}  // namespace

TEST_CASE("exact tail gives a point enclosure") {
  Enclosure e = tail_enclosure(half_powers(), 4, Rat(0));
  CHECK(e.is_point());
  CHECK(e.lo == Rat(1, 8));
}

TEST_CASE("tail of 1/(2^n+1) hits the width goal and brackets a long partial sum") {
  TermSpec spec{"shifted-half-powers",
                [](long n) -> Rat { return Rat(1) / (Rat(Int(1) << n) + 1); },
                DecayCertificate{Rat(2, 3), 1},  // (2^n+1)/(2^{n+1}+1) < 2/3
                {}};
  Rat goal = Rat(1, Int(10)) / Rat(Int(1) << 40);  // ~1e-13
  Enclosure e = tail_enclosure(spec, 4, goal);
  CHECK(e.width() <= goal);
  Rat oracle = 0;  // 200-term partial sum, strictly below the true tail
  for (long n = 4; n < 204; ++n) oracle += spec.at(n);
  CHECK(e.lo <= oracle);
  CHECK(oracle <= e.hi);
}

TEST_CASE("dishonest ratio declaration is a hard error") {
  TermSpec lying{"lying",
                 [](long n) -> Rat { return pow_rat(Rat(1, 2), n); },
                 DecayCertificate{Rat(1, 3), 1},
                 {}};
  CHECK_THROWS_WITH_AS(tail_enclosure(lying, 1, Rat(1, 1000)),
                       doctest::Contains("CertificateViolated"), Error);
}

TEST_CASE("dishonest exact tail is a hard error") {
  TermSpec lying{"lying-tail",
                 [](long n) -> Rat { return pow_rat(Rat(1, 2), n); },
                 {},
                 [](long n) -> Rat { return pow_rat(Rat(1, 2), n); }};
  CHECK_THROWS_AS(tail_enclosure(lying, 3, Rat(0)), Error);
}

TEST_CASE("negative terms rejected") {
  TermSpec neg{"neg", [](long) -> Rat { return Rat(-1); }, DecayCertificate{Rat(1, 2), 1}, {}};
  CHECK_THROWS_AS(tail_enclosure(neg, 1, Rat(1)), Error);
}

TEST_CASE("unreachable width goal surfaces NoConvergence") {
  TermSpec slow{"barely",
                [](long n) -> Rat { return pow_rat(Rat(9999, 10000), n); },
                DecayCertificate{Rat(9999, 10000), 1},
                {}};
  TailLimits lim;
  lim.max_terms = 16;
  CHECK_THROWS_WITH_AS(tail_enclosure(slow, 1, Rat(1, Int(1) << 80), lim),
                       doctest::Contains("NoConvergence"), Error);
}

TEST_CASE("refinement is monotone: tighter goals stay consistent") {
  TermSpec spec{"three-quarters-powers",
                [](long n) -> Rat { return pow_rat(Rat(3, 4), n); },
                DecayCertificate{Rat(3, 4), 1},
                {}};
  Enclosure coarse = tail_enclosure(spec, 2, Rat(1, 100));
  Enclosure fine = tail_enclosure(spec, 2, Rat(1, 1000000));
  CHECK(coarse.lo <= fine.lo);
  CHECK(fine.hi <= coarse.hi);
}

TEST_CASE("pick_dyadic lands strictly inside") {
  struct Case { Rat lo, hi; };
  for (const Case& c : {Case{Rat(1, 3), Rat(1, 2)}, Case{Rat(0), Rat(1, 1000)},
                        Case{Rat(-5, 7), Rat(-2, 3)},
                        Case{Rat(3, 8), Rat(7, 16)}}) {
    Rat p = pick_dyadic(c.lo, c.hi);
    CHECK(c.lo < p);
    CHECK(p < c.hi);
    Int den = p.get_den();
    CHECK((den & (den - 1)) == 0);  // power of two
  }
  CHECK_THROWS_AS(pick_dyadic(Rat(1, 2), Rat(1, 2)), Error);
}
