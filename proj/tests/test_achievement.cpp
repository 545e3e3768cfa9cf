#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "ahmes/achievement.hpp"
#include "doctest.h"

using namespace ahmes;

TEST_CASE("halves: tail equals the term, interval from the start") {
  auto rep = classify(families::geometric(2), 20);
  for (auto [n, r] : rep.per_index) CHECK(r == Relation::TailGE);
  CHECK(rep.verdict.kind == Verdict::IntervalUnionFrom);
  CHECK(rep.verdict.index == 1);
}

TEST_CASE("thirds: tail strictly below the term everywhere") {
  auto rep = classify(families::geometric(3), 20);
  for (auto [n, r] : rep.per_index) CHECK(r == Relation::TailLT);
  CHECK(rep.verdict.kind == Verdict::CantorCertified);
  CHECK(rep.verdict.index == 20);
}

TEST_CASE("sylvester: switch at n=2") {
  auto rep = classify(families::sylvester(), 12);
  CHECK(rep.per_index[0].second == Relation::TailGE);  // tail(>1) = 1/2 = x_1
  for (size_t i = 1; i < rep.per_index.size(); ++i)
    CHECK(rep.per_index[i].second == Relation::TailLT);
  CHECK(rep.verdict.kind == Verdict::Mixed);
}

TEST_CASE("classify is monotone in the horizon") {
  auto short_run = classify(families::geometric(3), 8);
  auto long_run = classify(families::geometric(3), 20);
  for (size_t i = 0; i < short_run.per_index.size(); ++i)
    CHECK(short_run.per_index[i].second == long_run.per_index[i].second);
}

TEST_CASE("classify rejects increasing input") {
  TermSpec bad{"increasing", [](long n) -> Rat { return Rat(n); },
               DecayCertificate{Rat(1, 2), 1}, {}};
  CHECK_THROWS_WITH_AS(classify(bad, 4), doctest::Contains("NotDecreasing"),
                       Error);
}

TEST_CASE("interval unions") {
  auto u1 = interval_union(families::geometric(2), 1);
  REQUIRE(u1.size() == 1);
  CHECK(u1[0].lo.lo == 0);
  CHECK(u1[0].hi.lo == 1);
  CHECK(u1[0].hi.is_point());

  // x_1 = 1, x_n = 1/2^n afterwards: two translates of [0, 1/2]
  TermSpec bumped{"one-then-halves",
                  [](long n) -> Rat { return n == 1 ? Rat(1) : pow_rat(Rat(1, 2), n); },
                  {},
                  [](long n) -> Rat {
                    return n == 1 ? Rat(3, 2) : pow_rat(Rat(1, 2), n - 1);
                  }};
  auto u2 = interval_union(bumped, 2);
  REQUIRE(u2.size() == 2);
  CHECK(u2[0].lo.lo == 0);
  CHECK(u2[0].hi.lo == Rat(1, 2));
  CHECK(u2[1].lo.lo == 1);
  CHECK(u2[1].hi.lo == Rat(3, 2));

  auto u3 = interval_union(families::geometric_from(2, 3), 3);
  REQUIRE(u3.size() == 1);
  CHECK(u3[0].lo.lo == 0);
  CHECK(u3[0].hi.lo == Rat(1, 4));

  CHECK_THROWS_WITH_AS(interval_union(families::geometric(2), 40),
                       doctest::Contains("HeadTooLarge"), Error);
}

TEST_CASE("12-term subset sums stay inside the computed union") {
  TermSpec spec = families::geometric(2);
  auto u = interval_union(spec, 1);
  std::vector<Rat> x;
  for (long n = 1; n <= 12; ++n) x.push_back(spec.at(n));
  for (long mask = 0; mask < (1 << 12); ++mask) {
    Rat s = 0;
    for (int b = 0; b < 12; ++b)
      if (mask & (1 << b)) s += x[size_t(b)];
    bool inside = false;
    for (const auto& iv : u) inside |= iv.lo.lo <= s && s <= iv.hi.hi;
    REQUIRE(inside);
  }
  // endpoints are approached within x_12 by pure prefixes
  Rat full = 0;
  for (const Rat& v : x) full += v;
  CHECK(u[0].hi.lo - full <= x.back());
}

TEST_CASE("greedy representation") {
  auto a = greedy_represent(families::geometric(2), Rat(1, 3), 12);
  std::string bits;
  for (bool b : a.picks) bits += b ? '1' : '0';
  CHECK(bits == "010101010101");  // binary expansion of 1/3
  CHECK(!a.exact_hit);

  auto b = greedy_represent(families::sylvester(), Rat(1), 8);
  CHECK(std::all_of(b.picks.begin(), b.picks.end(), [](bool p) { return p; }));
  CHECK(b.residual == Rat(1) / Rat(families::sylvester_term(9) - 1));

  auto c = greedy_represent(families::geometric(2), Rat(1, 2), 8);
  CHECK(c.exact_hit);
  CHECK(c.picks[0]);
  CHECK(c.residual == 0);

  CHECK_THROWS_WITH_AS(greedy_represent(families::geometric(2), Rat(3, 2), 8),
                       doctest::Contains("TargetOutside"), Error);
}

TEST_CASE("greedy residual upper bound decreases") {
  TermSpec spec = families::geometric(2);
  Rat residual = Rat(2, 7);
  for (long n = 1; n <= 20; ++n) {
    Rat x = spec.at(n);
    Rat before = residual;
    if (x <= residual) residual -= x;
    CHECK(residual <= before);
    CHECK(residual < x);  // characteristic of tail >= term families
  }
}

TEST_CASE("growth profile") {
  std::vector<Int> doubleexp;
  for (long k = 1; k <= 5; ++k) doubleexp.push_back(Int(1) << (1L << k));
  for (const Enclosure& e : growth_profile(doubleexp)) {
    CHECK(e.lo <= 1);
    CHECK(e.hi >= 1);
  }
  std::vector<Int> linear;
  for (long k = 1; k <= 40; ++k) linear.push_back(k + 1);
  auto prof = growth_profile(linear);
  CHECK(prof.back().hi < Rat(1, 5));

  std::vector<Int> syl;
  for (long k = 1; k <= 8; ++k) syl.push_back(families::sylvester_term(k));
  auto sp = growth_profile(syl);
  for (const Enclosure& e : sp) CHECK(e.hi < 3);
}

TEST_CASE("sylvester terms and telescoping") {
  CHECK(families::sylvester_term(1) == 2);
  CHECK(families::sylvester_term(2) == 3);
  CHECK(families::sylvester_term(3) == 7);
  CHECK(families::sylvester_term(4) == 43);
  CHECK(families::sylvester_term(5) == 1807);
  Rat head = 0;
  for (long k = 1; k <= 10; ++k) {
    head += Rat(1) / Rat(families::sylvester_term(k));
    CHECK(head == 1 - Rat(1) / Rat(families::sylvester_term(k + 1) - 1));
  }
}
