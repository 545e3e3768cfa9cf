#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "ahmes/lambert.hpp"

using namespace ahmes;

TEST_CASE("merge condition sums exactly") {
  auto c23 = check_merge_condition({2, 3});
  CHECK(c23.pass);
  CHECK(c23.sum == Rat(3, 2));  // 1/1 + 1/2

  auto c2 = check_merge_condition({2});
  CHECK(!c2.pass);
  CHECK(c2.sum == 1);

  auto c345 = check_merge_condition({3, 4, 5});
  CHECK(c345.pass);
  CHECK(c345.sum == Rat(1, 2) + Rat(1, 3) + Rat(1, 4));
  CHECK(c345.sum == Rat(13, 12));
}

TEST_CASE("merge spec parameters") {
  auto spec = make_merge_spec({2, 3});
  CHECK(spec.epsilon == Rat(1, 4));  // (1 - 1/4) * 3/2 = 9/8 > 1, 1/2 fails
  CHECK(spec.N0 == 3);

  CHECK_THROWS_WITH_AS(make_merge_spec({2}),
                       doctest::Contains("MergeConditionFails"), Error);
}

TEST_CASE("merged stream head") {
  auto spec = make_merge_spec({2, 3});
  auto head = merged_stream(spec, 5);
  REQUIRE(head.size() == 5);
  // 1/(2-1), 1/(3-1), 1/(4-1), 1/(8-1), 1/(9-1)
  CHECK(head[0].value == 1);
  CHECK(head[0].base_index == 1);
  CHECK(head[0].exponent == 1);
  CHECK(head[1].value == Rat(1, 2));
  CHECK(head[1].base_index == 2);
  CHECK(head[1].exponent == 1);
  CHECK(head[2].value == Rat(1, 3));
  CHECK(head[2].base_index == 1);
  CHECK(head[2].exponent == 2);
  CHECK(head[3].value == Rat(1, 7));
  CHECK(head[3].base_index == 1);
  CHECK(head[3].exponent == 3);
  CHECK(head[4].value == Rat(1, 8));
  CHECK(head[4].base_index == 2);
  CHECK(head[4].exponent == 2);
}

TEST_CASE("merged stream matches a brute-force multiset") {
  auto spec = make_merge_spec({2, 3});
  const long N = 200;
  auto stream = merged_stream(spec, N);
  // brute force: enumerate enough terms per base, sort descending
  std::vector<Rat> all;
  for (long t : spec.bases) {
    Int p = t;
    while (true) {
      Rat v = Rat(1) / (Rat(p) - 1);
      all.push_back(v);
      p *= t;
      // once the term is smaller than the stream's last value we can stop,
      // with a couple of spares for ties
      if (Rat(1) / (Rat(p) - 1) < stream.back().value / 4) break;
    }
  }
  std::sort(all.begin(), all.end(), std::greater<Rat>());
  REQUIRE(all.size() >= (size_t)N);
  for (long i = 0; i < N; ++i) {
    CHECK(stream[i].value == all[i]);
    if (i > 0) CHECK(stream[i].value <= stream[i - 1].value);
    // label consistency: value recomputes from base and exponent
    Int p = 1;
    long t = spec.bases[stream[i].base_index - 1];
    for (long e = 0; e < stream[i].exponent; ++e) p *= t;
    CHECK(stream[i].value == Rat(1) / (Rat(p) - 1));
  }
}

TEST_CASE("single-base stream for completeness") {
  auto c = check_merge_condition({2});
  CHECK(!c.pass);
  // merged_stream itself does not need the merge condition
  LambertMergeSpec spec{{2}, Rat(1, 2), 2};
  auto head = merged_stream(spec, 3);
  CHECK(head[0].value == 1);
  CHECK(head[1].value == Rat(1, 3));
  CHECK(head[2].value == Rat(1, 7));
}

TEST_CASE("lambert tail encloses its partial sums") {
  for (long t : {2L, 3L}) {
    for (long from : {1L, 4L, 9L}) {
      Enclosure e = lambert_tail(t, from, Rat(1, Int(1) << 40));
      CHECK(e.hi - e.lo <= Rat(1, Int(1) << 40));
      // partial sums approach from below and stay inside
      Rat partial = 0;
      Int p = 1;
      for (long j = 1; j <= from + 60; ++j) {
        p *= t;
        if (j > from) partial += Rat(1) / (Rat(p) - 1);
      }
      CHECK(partial <= e.hi);
      CHECK(e.lo <= partial + Rat(2) / (Rat(p) - 1));
    }
  }
}

TEST_CASE("greedy merged run hits 7/5 exactly") {
  auto spec = make_merge_spec({2, 3});
  auto sol = solve_merged(spec, Rat(7, 5), 80);
  CHECK(sol.exact_hit);
  CHECK(sol.residual == 0);
  REQUIRE(sol.A.size() == 2);
  CHECK(sol.A[0] == std::vector<long>{1, 2, 4});  // 1 + 1/3 + 1/15
  CHECK(sol.A[1] == std::vector<long>{});
}

TEST_CASE("greedy residual replays from the stream") {
  auto spec = make_merge_spec({2, 3});
  auto sol = solve_merged(spec, Rat(13, 10), 60);
  CHECK(!sol.exact_hit);
  CHECK(sol.residual >= 0);
  CHECK(sol.residual_bound > 0);
  auto stream = merged_stream(spec, sol.examined);
  Rat r(13, 10);
  for (const auto& term : stream) {
    if (term.value <= r) r -= term.value;
    CHECK(r >= 0);
  }
  CHECK(r == sol.residual);
}

TEST_CASE("targets above reach are refused with a certificate") {
  auto spec = make_merge_spec({2, 3});
  CHECK_THROWS_WITH_AS(solve_merged(spec, Rat(4), 80),
                       doctest::Contains("TargetOutside"), Error);
}

TEST_CASE("merged covering threshold") {
  auto spec = make_merge_spec({2, 3});
  CHECK(kakcond4_threshold(spec, 64) == 1);
}

TEST_CASE("per-base geometric domination") {
  for (long t : {2L, 3L}) {
    auto ok = cantor_check(t, 10);
    REQUIRE(ok.size() == 10);
    for (bool b : ok) CHECK(b);
  }
}
