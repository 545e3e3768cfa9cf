#include "ahmes/achievement.hpp"

#include <algorithm>
#include <map>

namespace ahmes {

namespace {

// Relation at index n via certified tail bounds, refining up to a cap and
// surfacing Undecided rather than guessing.
Relation relation_at(const TermSpec& spec, long n, const Rat& x_n,
                     const TailLimits& lim) {
  Rat goal = x_n / 1024;
  for (int round = 0; round < 4; ++round) {
    Enclosure t = tail_enclosure(spec, n + 1, goal, lim);
    if (t.lo >= x_n) return Relation::TailGE;
    if (t.hi < x_n) return Relation::TailLT;
    if (t.is_point()) break;  // exact and straddling: x_n == tail impossible here
    goal /= 65536;
  }
  return Relation::Undecided;
}

// Quotient tail/term certified non-decreasing at n: extends a checked
// TailGE prefix to all larger indices for the families in scope.
bool quotient_nondecreasing(const TermSpec& spec, long n, const Rat& x_n,
                            const Rat& x_n1, const TailLimits& lim) {
  Rat goal = x_n / (Rat(1) << 40);
  Enclosure t_n = tail_enclosure(spec, n + 1, goal, lim);
  Enclosure t_n1 = tail_enclosure(spec, n + 2, goal, lim);
  return t_n1.lo * x_n >= t_n.hi * x_n1;
}

}  // namespace

ClassificationReport classify(const TermSpec& spec, long horizon,
                              const TailLimits& lim) {
  ClassificationReport report;
  std::vector<Rat> x(horizon + 2);
  for (long n = 1; n <= horizon + 1; ++n) {
    x[n] = spec.at(n);
    if (x[n] <= 0) throw Error("NonPositiveTerm", spec.name);
    if (n > 1 && x[n] > x[n - 1])
      throw Error("NotDecreasing",
                  spec.name + " increases at n=" + std::to_string(n));
  }
  bool all_lt = true;
  long first_ge_suffix = horizon + 1;  // least m with TailGE on [m, horizon]
  for (long n = 1; n <= horizon; ++n) {
    Relation r = relation_at(spec, n, x[n], lim);
    report.per_index.emplace_back(n, r);
    if (r != Relation::TailLT) all_lt = false;
  }
  for (long n = horizon; n >= 1; --n) {
    if (report.per_index[n - 1].second == Relation::TailGE)
      first_ge_suffix = n;
    else
      break;
  }
  if (all_lt) {
    report.verdict = {Verdict::CantorCertified, horizon};
    return report;
  }
  if (first_ge_suffix <= horizon) {
    bool cert = true;
    for (long n = std::max<long>(1, horizon - 8); n < horizon && cert; ++n)
      cert = quotient_nondecreasing(spec, n, x[n], x[n + 1], lim);
    if (cert) {
      report.verdict = {Verdict::IntervalUnionFrom, first_ge_suffix};
      return report;
    }
  }
  report.verdict = {Verdict::Mixed, 0};
  return report;
}

std::vector<AchievementInterval> interval_union(const TermSpec& spec, long m,
                                                long head_cap,
                                                const TailLimits& lim) {
  if (m < 1) throw Error("BadArgument", "m >= 1");
  if (m > 1 && (Int(1) << (m - 1)) > head_cap)
    throw Error("HeadTooLarge",
                "2^" + std::to_string(m - 1) + " head subsets exceed cap");

  std::vector<Rat> sums{Rat(0)};
  for (long n = 1; n < m; ++n) {
    Rat x = spec.at(n);
    size_t sz = sums.size();
    for (size_t i = 0; i < sz; ++i) sums.push_back(sums[i] + x);
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  Rat goal = spec.at(m) / (Rat(1) << 20);
  Enclosure tail = tail_enclosure(spec, m, goal, lim);

  std::vector<AchievementInterval> out;
  size_t i = 0;
  while (i < sums.size()) {
    Rat start = sums[i];
    Rat last = start;
    size_t j = i + 1;
    while (j < sums.size()) {
      // next translate [sums[j], sums[j]+tail] merges iff sums[j] <= last+tail
      if (sums[j] <= last + tail.lo) {
        last = sums[j];
        ++j;
      } else if (sums[j] > last + tail.hi) {
        break;
      } else {
        // ambiguous overlap: refine the tail enclosure
        goal /= Rat(1) << 20;
        tail = tail_enclosure(spec, m, goal, lim);
        if (tail.width() > 0 && sums[j] > last + tail.lo &&
            sums[j] <= last + tail.hi)
          throw Error("Undecidable", "interval merge ambiguous after refinement");
      }
    }
    out.push_back({Enclosure(start), tail + last});
    i = j;
  }
  return out;
}

RepresentationStream greedy_represent(const TermSpec& spec, const Rat& target,
                                      long max_terms, const TailLimits& lim) {
  RepresentationStream rs;
  rs.target = target;
  rs.residual = target;
  if (target < 0) throw Error("TargetOutside", "target < 0");
  Enclosure total = tail_enclosure(spec, 1, target == 0 ? Rat(1) : target / 1024, lim);
  if (enclosure_compare(total, target) == Ordering::Below)
    throw Error("TargetOutside", "target above certified total sum");

  for (long n = 1; n <= max_terms; ++n) {
    if (rs.residual == 0) {
      rs.exact_hit = true;
      break;
    }
    Rat x = spec.at(n);
    if (x <= rs.residual) {
      rs.picks.push_back(true);
      rs.residual -= x;
    } else {
      rs.picks.push_back(false);
    }
    if (rs.residual > 0) {
      Enclosure t = tail_enclosure(spec, n + 1, rs.residual / 1024, lim);
      if (enclosure_compare(t, rs.residual) == Ordering::Below)
        throw Error("TargetOutside",
                    "residual exceeds remaining tail at n=" + std::to_string(n));
    }
  }
  return rs;
}

std::vector<Enclosure> growth_profile(const std::vector<Int>& a) {
  std::vector<Enclosure> out;
  for (size_t idx = 0; idx < a.size(); ++idx) {
    long k = static_cast<long>(idx) + 1;
    if (a[idx] < 1) throw Error("BadArgument", "growth_profile needs a_k >= 1");
    if (idx > 0 && a[idx] <= a[idx - 1])
      throw Error("BadArgument", "growth_profile needs strictly increasing a");
    Int b = static_cast<long>(bit_length(a[idx]));  // log2(a) in [b-1, b]
    Rat lo = 0;
    if (b - 1 >= 1) lo = Rat(Int(static_cast<long>(bit_length(b - 1)) - 1)) / k;
    Rat hi = Rat(Int(static_cast<long>(bit_length(b)))) / k;
    out.emplace_back(lo, hi);
  }
  return out;
}

namespace families {

TermSpec geometric(long base) {
  if (base < 2) throw Error("BadArgument", "geometric base >= 2");
  Rat b(base);
  TermSpec spec;
  spec.name = "geometric-" + std::to_string(base);
  spec.term = [b](long n) -> Rat { return pow_rat(b, -n); };
  spec.decay = DecayCertificate{1 / b, 1};
  spec.exact_tail = [b](long n) -> Rat {
    return pow_rat(b, -(n - 1)) / (b - 1);  // sum_{k>=n} b^-k
  };
  return spec;
}

TermSpec geometric_from(long base, long n0) {
  TermSpec g = geometric(base);
  TermSpec spec;
  spec.name = g.name + "-from-" + std::to_string(n0);
  spec.term = [g, n0](long n) -> Rat { return n < n0 ? Rat(0) : g.term(n); };
  spec.exact_tail = [g, n0](long n) -> Rat { return g.exact_tail(std::max(n, n0)); };
  return spec;
}

Int sylvester_term(long n) {
  static std::vector<Int> memo{Int(2)};  // s_1 = 2
  if (n < 1) throw Error("BadArgument", "sylvester index >= 1");
  while (static_cast<long>(memo.size()) < n) {
    const Int& s = memo.back();
    memo.push_back(s * s - s + 1);
  }
  return memo[n - 1];
}

TermSpec sylvester() {
  TermSpec spec;
  spec.name = "sylvester";
  spec.term = [](long n) -> Rat { return Rat(1) / Rat(sylvester_term(n)); };
  // sum_{k>=n} 1/s_k = 1/(s_n - 1), by s_{k+1}-1 = s_k(s_k-1)
  spec.exact_tail = [](long n) -> Rat { return Rat(1) / Rat(sylvester_term(n) - 1); };
  spec.decay = DecayCertificate{Rat(2, 3), 1};  // s_n/s_{n+1} <= 2/3 for s_n >= 2
  return spec;
}

}  // namespace families

}  // namespace ahmes
