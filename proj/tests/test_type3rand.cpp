#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "ahmes/type3rand.hpp"

using namespace ahmes;

TEST_CASE("default offset cap") {
  auto F = growths::factorial();
  CHECK(default_c(F, 1) == 0);
  // n=5: min(floor(sqrt(120)), floor(120/24)) = min(10, 5) = 5
  CHECK(default_c(F, 5) == 5);
  // n=4: min(floor(sqrt(24)), floor(24/6)) = min(4, 4) = 4
  CHECK(default_c(F, 4) == 4);
  // large n: the ratio F(n)/F(n-1) = n stays the binding side for a while
  CHECK(default_c(F, 20) == 20);
}

TEST_CASE("plan certification") {
  auto F = growths::factorial();
  auto c = [&](long n) -> Int { return default_c(F, n); };
  long n0 = certify_plan(F, c, 80);
  CHECK(n0 == 48);

  // plain exponential growth never satisfies 48 c_{n+1} + 1 < ratio^2
  auto G = growths::pow2();
  auto cg = [&](long n) -> Int { return default_c(G, n); };
  CHECK_THROWS_WITH_AS(certify_plan(G, cg, 60), doctest::Contains("NoN0"),
                       Error);

  // a zero offset cap can never host a uniform draw from {1..c_n}
  auto c0 = [](long) -> Int { return Int(0); };
  CHECK_THROWS_AS(certify_plan(F, c0, 60), Error);
}

TEST_CASE("counter-based mixing is a pure function") {
  CHECK(mix64(1, 2) == mix64(1, 2));
  CHECK(mix64(1, 2) != mix64(1, 3));
  CHECK(mix64(1, 2) != mix64(2, 2));
  // no short cycles over a small scan
  std::set<std::uint64_t> seen;
  for (std::uint64_t n = 0; n < 4096; ++n) seen.insert(mix64(7, n));
  CHECK(seen.size() == 4096);
}

TEST_CASE("sampled sequences respect the plan") {
  auto F = growths::factorial();
  RandomPlan plan;
  plan.c = [&](long n) -> Int { return default_c(F, n); };
  plan.n0 = certify_plan(F, plan.c, 80);
  plan.seed = 12345;

  auto a = sample_sequence(plan, F, 60);
  REQUIRE(a.size() == 60);
  for (long n = 1; n <= 60; ++n) {
    if (n < plan.n0) {
      CHECK(a[n - 1] == n);
    } else {
      Int fl = floor_rat(F.F(n));
      Int off = a[n - 1] - fl;
      CHECK(off >= 1);
      CHECK(off <= plan.c(n));
      // relative deviation from F(n) is tiny: |a_n - F(n)| <= c_n + 1
      CHECK(abs(Rat(a[n - 1]) - F.F(n)) <= Rat(plan.c(n)) + 1);
    }
    if (n > 1) CHECK(a[n - 1] > a[n - 2]);
  }

  auto b = sample_sequence(plan, F, 60);
  CHECK(a == b);  // same seed, same draw

  RandomPlan plan2 = plan;
  plan2.seed = 54321;
  auto c2 = sample_sequence(plan2, F, 60);
  CHECK(a != c2);
  // but the deterministic head agrees
  for (long n = 1; n < plan.n0; ++n) CHECK(c2[n - 1] == a[n - 1]);
}

TEST_CASE("separation of distinct offset prefixes") {
  auto F = growths::factorial();
  auto c = [&](long n) -> Int { return default_c(F, n); };
  long n0 = certify_plan(F, c, 80);
  long m = n0;

  std::vector<Int> d{1, 2, 3, 4}, dp{1, 2, 4, 4};
  Rat gap = verify_separation(F, c, m, d, dp);
  CHECK(gap > 0);
  // the gap is dominated by the first disagreement, 1/(F(m+2)+3) - 1/(F(m+2)+4)
  Int fl = floor_rat(F.F(m + 2));
  Rat lead = Rat(1) / Rat(fl + 3) - Rat(1) / Rat(fl + 4);
  CHECK(gap < lead);
  CHECK(gap > lead / 2);

  CHECK_THROWS_WITH_AS(verify_separation(F, c, m, d, d),
                       doctest::Contains("OffsetsEqual"), Error);

  std::vector<Int> big{Int(1) << 40, 2, 3, 4};
  CHECK_THROWS_WITH_AS(verify_separation(F, c, m, big, dp),
                       doctest::Contains("OffsetsOutOfRange"), Error);

  // swapping the prefixes flips orientation but not the certified gap
  CHECK(verify_separation(F, c, m, dp, d) == gap);
}
