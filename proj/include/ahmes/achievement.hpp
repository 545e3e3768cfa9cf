#pragma once

#include <vector>

#include "ahmes/series.hpp"

namespace ahmes {

// Tail-vs-term relation at one index: TailGE certifies
// sum_{k>n} x_k >= x_n, TailLT the strict opposite.
enum class Relation { TailGE, TailLT, Undecided };

struct Verdict {
  enum Kind { IntervalUnionFrom, CantorCertified, Mixed } kind;
  long index = 0;  // m for IntervalUnionFrom, horizon for CantorCertified
};

struct ClassificationReport {
  std::vector<std::pair<long, Relation>> per_index;
  Verdict verdict;
};

ClassificationReport classify(const TermSpec& spec, long horizon,
                              const TailLimits& lim = {});

// Closed interval of the achievement set; the left endpoint is an exact
// head sum, the right endpoint inherits the tail enclosure.
struct AchievementInterval {
  Enclosure lo;
  Enclosure hi;
};

// Sorted pairwise-disjoint intervals whose union is the achievement set,
// assuming classify certified IntervalUnionFrom(m).
std::vector<AchievementInterval> interval_union(const TermSpec& spec, long m,
                                                long head_cap = 1 << 20,
                                                const TailLimits& lim = {});

struct RepresentationStream {
  Rat target;
  std::vector<bool> picks;   // epsilon_n, 1-based at index n-1
  Rat residual;              // exact: target - sum of picked terms
  bool exact_hit = false;
  Enclosure residual_enclosure() const { return Enclosure(residual); }
};

RepresentationStream greedy_represent(const TermSpec& spec, const Rat& target,
                                      long max_terms,
                                      const TailLimits& lim = {});

// Enclosures of log2(log2(a_k))/k from pure bit-length bounds; a growth
// diagnostic, intentionally coarse.
std::vector<Enclosure> growth_profile(const std::vector<Int>& a);

namespace families {

TermSpec geometric(long base);               // x_n = base^-n, exact tail
TermSpec geometric_from(long base, long n0); // x_n = base^-n for n >= n0, else 0-shifted reindex
TermSpec sylvester();                        // x_n = 1/s_n, telescoping tail
Int sylvester_term(long n);                  // s_n itself

}  // namespace families

}  // namespace ahmes
