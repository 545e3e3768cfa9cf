#pragma once

#include <vector>

#include "ahmes/series.hpp"

namespace ahmes {

struct MergeCheck {
  bool pass;
  Rat sum;  // sum of 1/(t_k - 1), exact
};

MergeCheck check_merge_condition(const std::vector<long>& bases);

struct LambertMergeSpec {
  std::vector<long> bases;  // strictly increasing, each >= 2
  Rat epsilon;              // largest 1/2^j with (1-eps) * sum > 1
  long N0;                  // floor(log2(1/eps)) + 1
};

// Throws MergeConditionFails when sum 1/(t_k - 1) <= 1.
LambertMergeSpec make_merge_spec(const std::vector<long>& bases);

struct MergedTerm {
  Rat value;       // 1/(t_k^n - 1)
  int base_index;  // 1-based position in spec.bases
  long exponent;
};

// The `count` largest terms of the merged multiset {1/(t_k^n - 1)},
// non-increasing, ties by (base_index, exponent).
std::vector<MergedTerm> merged_stream(const LambertMergeSpec& spec, long count);

// Enclosure of sum_{j > from_exp} 1/(t^j - 1).
Enclosure lambert_tail(long t, long from_exp, const Rat& width_goal,
                       const TailLimits& lim = {});

struct MergedSolution {
  std::vector<std::vector<long>> A;  // chosen exponents per base
  Rat residual;                      // q - sum of picks, exact, >= 0
  Rat residual_bound;                // first unpicked term value at stop
  long examined = 0;
  bool exact_hit = false;
};

// Greedy run of the merged stream toward q; TargetOutside is certified
// against tail enclosures of the remaining stream.
MergedSolution solve_merged(const LambertMergeSpec& spec, const Rat& q,
                            long steps, const TailLimits& lim = {});

// Least n* such that x_n <= sum_{l>n} x_l is certified for every
// n* <= n <= search_cap (x_n the merged stream).  Past the cap the
// condition is the declared consequence of (1-eps) * sum 1/(t_k-1) > 1
// once every base frontier passed N0; that hypothesis is re-checked at n*.
long kakcond4_threshold(const LambertMergeSpec& spec, long search_cap,
                        const TailLimits& lim = {});

// For each n <= horizon certifies sum_{l>n} 1/(t^l - 1) < 1/(t^n - 1)
// through the geometric majorant (t^n - 1)/(t^l - 1) < t^n / t^l.
std::vector<bool> cantor_check(long t, long horizon);

}  // namespace ahmes
