#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ahmes/series.hpp"

namespace ahmes {

// Strictly increasing positive integer sequence together with whatever
// exact structure the constructor knows about it.
struct IntSeq {
  std::string name;
  std::function<Int(long)> term;
  std::function<Rat(long)> exact_tail_sq;  // optional: sum_{k>n} 1/a_k^2
};

// Schedule of integer intervals J_n plus the series certificates the
// covering engine needs: 1/min J_n, 1/max J_n and the gap terms
// (|J_n|-1)/(min J_n * max J_n).
struct IntervalSchedule {
  std::string name;
  std::function<std::pair<Int, Int>(long)> J;  // (min, max)
  TermSpec inv_min;
  TermSpec inv_max;
  TermSpec gap;
  // Declared: the covering condition holds for every n >= this index
  // (single-term dominance, re-verified per index on the checked range).
  long cover_certified_from = -1;
  std::vector<long> clamped;  // indices where max{a_n - c_n, 1} clamped

  Int min_at(long n) const { return J(n).first; }
  Int max_at(long n) const { return J(n).second; }
};

enum class CoverStatus { Holds, Fails, Undecided };

CoverStatus verify_cover_condition(const IntervalSchedule& s, long n,
                                   const TailLimits& lim = {});

// Least m <= search_cap with Holds on [m, search_cap], past every clamped
// index, backed by the schedule's declared certificate beyond the cap.
long find_threshold(const IntervalSchedule& s, long search_cap,
                    const TailLimits& lim = {});

// Enclosures of both endpoints of the solvable window
// sum_{n<m} 1/min J_n + I_m.
struct Window {
  Enclosure lo;
  Enclosure hi;
};
Window target_window(const IntervalSchedule& s, long m, const Rat& width_goal,
                     const TailLimits& lim = {});

struct WindowState {
  long m = 1;
  Rat partial = 0;            // sum of emitted reciprocals
  Rat residual = 0;           // q - partial, exact
  std::vector<Int> emitted;   // chosen x_n, n = 1..m+steps-1
  Enclosure window_lo;        // I_n endpoints at the final index
  Enclosure window_hi;
  Rat residual_width_bound() const { return window_hi.hi - window_lo.lo; }
};

// Streams choices x_n in J_n forcing sum 1/x_n toward q; deterministic
// (smallest feasible choice each step).
WindowState solve_stream(const IntervalSchedule& s, long m, const Rat& q,
                         long steps, const TailLimits& lim = {});

// Type-2 counterexample schedule: c_1 = 1, c_n = floor(a_n^{3/2}/a_{n-1})+1,
// J_n = [max{a_n - c_n, 1}, a_n].
IntervalSchedule type2_schedule(const IntSeq& a, long probe_horizon = 12);

// Type-3 counterexample schedule: J_n = [a_n + 1, a_n + 4C + 1], with the
// tail condition 1/a_n^2 <= C * sum_{k>n} 1/a_k^2 certified per index.
IntervalSchedule type3_schedule(const IntSeq& a, const Int& C,
                                long horizon = 64, const TailLimits& lim = {});

// Smallest C certifiable on the checked range (needs an exact square tail).
Int minimal_type3_C(const IntSeq& a, long horizon);

namespace schedules {

// Singleton head at 2^n+1 for n <= 3, then [2^n+1, 2^n+5]: the schedule
// whose window is the segment [0.7488145169..., 0.7644997803...].
IntervalSchedule pow2_offsets5();

// [2^n+1, 2^n+5] for every n (covering holds from n = 1).
IntervalSchedule pow2_offsets5_full();

// Singletons {2^n}: covering fails everywhere.
IntervalSchedule pow2_singleton();

// Singletons {n(n+1)}: telescoping, window [1,1].
IntervalSchedule triangular_singleton();

IntervalSchedule by_name(const std::string& name);

}  // namespace schedules

namespace seqs {

IntSeq pow2();           // 2^n, exact square tail 4^-n/3
IntSeq pow2_doubleexp(); // 2^(2^n)
IntSeq pow_19_10();      // floor(2^(1.9^n))

}  // namespace seqs

}  // namespace ahmes
