#pragma once

#include "ahmes/multidim.hpp"

namespace ahmes {

// Injective enumeration of all rationals with |t_i| <= i: zero first, then
// positive rationals in lowest terms ordered by numerator+denominator (ties
// by numerator), each followed by its negative; a value too large for its
// slot is deferred until the index catches up.
std::vector<Rat> enumerate_rationals(long count);

enum class ScheduleMode { Paper, Demo };

struct StolarskySchedule {
  ScheduleMode mode = ScheduleMode::Paper;
  long max_d = 1;
  long k0 = -1;  // factorial branch end (Paper mode only)
  long depth_cap = 140;
  std::function<Int(long)> N;
  std::function<Int(long)> M;  // min{floor(N/4k), isqrt(N)}
  std::vector<long> m;         // m[i-1] = stage where coordinate i activates
  std::vector<VandermondeData> vds;  // per dimension 1..max_d
  std::vector<Int> Dd;               // max{d v_d, 2^{10d+1}}
  long d_at(long k) const;           // active dimension at stage k
};

// Paper mode: N_k = (2k-1)! up to the exact crossover k0, then
// floor(2^(2^sqrt(k))); Demo mode: N_k = (2k-1)! 4^k throughout.
// Activation stages m(1) < m(2) < ... are found by scanning for the
// per-stage transfer inequality over a certified window, including the
// boundary stage where the dimension steps up.
StolarskySchedule make_schedule(ScheduleMode mode, long max_d,
                                long depth_cap = 140);

struct StolarskyState {
  long k = 0;                // next stage index
  long start = 0;            // m(1)
  std::vector<Int> emitted;  // d_at(l) terms per completed stage l
  std::vector<Rat> targets;  // x_i for activated coordinates
  std::vector<Rat> partial;
  std::vector<Enclosure> residual;  // x_i - partial_i - tail
  std::vector<Rat> box;             // current radii
};

// Runs stages m(1) .. m(max_d)+extra-1, activating each coordinate at its
// stage with a dyadic target inside the certified box, and re-proving
// membership after every stage (InvariantBreach on failure).
StolarskyState run_stolarsky(const StolarskySchedule& sched, long extra,
                             const TailLimits& lim = {});

// Recomputes everything from the emitted terms and targets alone and
// returns the worst relative margin in (0, 1]; any inconsistency (wrong
// block structure, offsets past M, membership lost) throws InvariantBreach.
Rat verify_state(const StolarskySchedule& sched, const StolarskyState& st,
                 const TailLimits& lim = {});

}  // namespace ahmes
