#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ahmes/solver1d.hpp"
#include "doctest.h"

using namespace ahmes;

namespace {

// J_n = [n^2, n^2+1]; the gap ratio creeps toward 1, hence the generous
// declared bound
IntervalSchedule squares_schedule() {
  auto J = [](long n) -> std::pair<Int, Int> {
    Int q = Int(n) * n;
    return {q, q + 1};
  };
  IntervalSchedule s;
  s.name = "squares";
  s.J = J;
  s.inv_min = {"squares.inv_min", [](long n) -> Rat { return Rat(1, Int(n) * n); },
               DecayCertificate{Rat(9999, 10000), 1}, {}};
  s.inv_max = {"squares.inv_max",
               [](long n) -> Rat { return Rat(1) / (Rat(Int(n) * n) + 1); },
               DecayCertificate{Rat(9999, 10000), 1}, {}};
  s.gap = {"squares.gap",
           [](long n) -> Rat {
             Rat q(Int(n) * n);
             return Rat(1) / (q * (q + 1));
           },
           DecayCertificate{Rat(9999, 10000), 1}, {}};
  s.cover_certified_from = 1;
  return s;
}

}  // namespace

TEST_CASE("covering condition verdicts") {
  auto full = schedules::pow2_offsets5_full();
  CHECK(verify_cover_condition(full, 1) == CoverStatus::Holds);
  CHECK(verify_cover_condition(full, 4) == CoverStatus::Holds);

  auto single = schedules::pow2_singleton();
  for (long n = 1; n <= 8; ++n)
    CHECK(verify_cover_condition(single, n) == CoverStatus::Fails);

  CHECK(verify_cover_condition(squares_schedule(), 10) == CoverStatus::Holds);
}

TEST_CASE("thresholds") {
  CHECK(find_threshold(schedules::pow2_offsets5_full(), 64) == 1);
  CHECK(find_threshold(schedules::pow2_offsets5(), 64) == 3);
  CHECK_THROWS_WITH_AS(find_threshold(schedules::pow2_singleton(), 32),
                       doctest::Contains("NoThreshold"), Error);
}

TEST_CASE("window endpoints render to the published segment") {
  auto s = schedules::pow2_offsets5();
  auto w = target_window(s, 4, Rat(1, Int(1) << 60));
  CHECK(decimal_render(w.lo.lo, 10, Round::TowardZero) == "0.7488145169");
  CHECK(decimal_render(w.hi.hi, 10, Round::TowardZero) == "0.7644997803");
}

TEST_CASE("degenerate singleton windows") {
  auto w = target_window(schedules::pow2_singleton(), 1, Rat(0));
  CHECK(w.lo.is_point());
  CHECK(w.lo.lo == 1);
  CHECK(w.hi.lo == 1);

  auto t = target_window(schedules::triangular_singleton(), 1, Rat(0));
  CHECK(t.lo.lo == 1);
  CHECK(t.hi.hi == 1);
}

TEST_CASE("streaming 3/4 through the power-of-two offsets") {
  auto s = schedules::pow2_offsets5();
  auto st = solve_stream(s, 3, Rat(3, 4), 30);
  // frozen prefix from a reference run, offsets all within {1..5}
  std::vector<long> expect{3, 5, 9, 21, 36, 67, 133, 261, 517, 1027, 2053, 4098, 8195};
  REQUIRE(st.emitted.size() >= expect.size());
  for (size_t i = 0; i < expect.size(); ++i) CHECK(st.emitted[i] == expect[i]);
  for (size_t n = 0; n < st.emitted.size(); ++n) {
    Int off = st.emitted[n] - (Int(1) << long(n + 1));
    CHECK(off >= 1);
    CHECK(off <= 5);
  }
  CHECK(st.residual >= 0);
  CHECK(st.residual <= st.window_hi.hi);

  auto again = solve_stream(s, 3, Rat(3, 4), 30);
  CHECK(again.emitted == st.emitted);  // determinism
}

TEST_CASE("endpoint target takes the left edge forever") {
  auto st = solve_stream(schedules::pow2_singleton(), 1, Rat(1), 20);
  bool hit_ends = true;
  for (size_t n = 0; n < st.emitted.size(); ++n)
    hit_ends &= st.emitted[n] == (Int(1) << long(n + 1));
  CHECK(hit_ends);
  auto tri = solve_stream(schedules::triangular_singleton(), 1, Rat(1), 12);
  for (size_t n = 0; n < tri.emitted.size(); ++n)
    CHECK(tri.emitted[n] == Int(long(n + 1)) * long(n + 2));
}

TEST_CASE("targets outside the window are refused") {
  CHECK_THROWS_WITH_AS(solve_stream(schedules::pow2_offsets5(), 3, Rat(2), 5),
                       doctest::Contains("TargetOutsideWindow"), Error);
  CHECK_THROWS_WITH_AS(solve_stream(schedules::pow2_offsets5(), 3, Rat(1, 100), 5),
                       doctest::Contains("TargetOutsideWindow"), Error);
}

TEST_CASE("residual stays inside the certified window at every step") {
  auto s = schedules::pow2_offsets5_full();
  Rat q(2, 3);
  auto st = solve_stream(s, 1, q, 25);
  // replay: after each prefix the remaining target must lie in I_{n+1}
  Rat residual = q;
  for (size_t n = 0; n < st.emitted.size(); ++n) {
    residual -= Rat(1) / st.emitted[n];
    Enclosure lo = tail_enclosure(s.inv_max, long(n) + 2, Rat(1, Int(1) << 80));
    Enclosure hi = tail_enclosure(s.inv_min, long(n) + 2, Rat(1, Int(1) << 80));
    CHECK(residual >= lo.lo);
    CHECK(residual <= hi.hi);
  }
  CHECK(residual == st.residual);
}

TEST_CASE("type2 schedule construction") {
  auto s = type2_schedule(seqs::pow_19_10());
  Int a1 = seqs::pow_19_10().term(1), a2 = seqs::pow_19_10().term(2);
  Int c2 = isqrt(a2 * a2 * a2) / a1 + 1;
  auto [lo2, hi2] = s.J(2);
  CHECK(hi2 == a2);
  CHECK(lo2 == (a2 - c2 < 1 ? Int(1) : a2 - c2));
  CHECK(std::find(s.clamped.begin(), s.clamped.end(), 2) != s.clamped.end());
  long m = find_threshold(s, 12);
  CHECK(m == 6);
  CHECK(m > 2);  // clamped indices are excluded

  // doubly exponential growth violates the premise; the schedule still
  // builds, but no covering threshold can be certified
  auto bad = type2_schedule(seqs::pow2_doubleexp(), 8);
  CHECK_THROWS_WITH_AS(find_threshold(bad, 8),
                       doctest::Contains("NoThreshold"), Error);
}

TEST_CASE("type2 first interval") {
  auto s = type2_schedule(seqs::pow2());  // a_1 = 2
  auto [lo, hi] = s.J(1);
  CHECK(lo == 1);
  CHECK(hi == 2);
}

TEST_CASE("type3 schedule and minimal constant") {
  CHECK(minimal_type3_C(seqs::pow2(), 64) == 3);
  auto s = type3_schedule(seqs::pow2(), 3);
  auto [lo, hi] = s.J(5);
  CHECK(lo == 33);
  CHECK(hi == 45);  // 2^5 + 4*3 + 1
  CHECK(find_threshold(s, 32) >= 1);

  CHECK_THROWS_WITH_AS(type3_schedule(seqs::pow2_doubleexp(), Int(1000), 8),
                       doctest::Contains("CUnsupported"), Error);
}
