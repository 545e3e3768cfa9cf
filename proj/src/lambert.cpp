#include "ahmes/lambert.hpp"

#include <queue>

namespace ahmes {
namespace {

void check_bases(const std::vector<long>& bases) {
  if (bases.empty()) throw Error("BadArgument", "need at least one base");
  long prev = 1;
  for (long t : bases) {
    if (t < 2) throw Error("BadArgument", "bases must be >= 2");
    if (t <= prev) throw Error("BadArgument", "bases must be strictly increasing");
    prev = t;
  }
}

Rat term_value(long t, long e) {
  Rat d = pow_rat(Rat(t), e) - 1;
  return 1 / d;
}

struct HeapEntry {
  Rat value;
  int k;   // 1-based base index
  long e;  // exponent
  bool operator<(const HeapEntry& o) const {
    // priority_queue pops the "largest": bigger value first,
    // ties by smaller (k, e)
    if (value != o.value) return value < o.value;
    if (k != o.k) return k > o.k;
    return e > o.e;
  }
};

struct Stream {
  const LambertMergeSpec& spec;
  std::priority_queue<HeapEntry> heap;
  std::vector<long> frontier;  // next exponent per base (1-based index 0..)

  explicit Stream(const LambertMergeSpec& s) : spec(s) {
    for (size_t i = 0; i < s.bases.size(); ++i) {
      heap.push({term_value(s.bases[i], 1), int(i + 1), 1});
      frontier.push_back(1);
    }
  }

  HeapEntry pop() {
    HeapEntry top = heap.top();
    heap.pop();
    heap.push({term_value(spec.bases[top.k - 1], top.e + 1), top.k, top.e + 1});
    frontier[top.k - 1] = top.e + 1;
    return top;
  }

  // Enclosure of everything not yet popped.
  Enclosure remaining(const Rat& goal, const TailLimits& lim) const {
    Enclosure total(Rat(0));
    Rat per = goal / long(spec.bases.size());
    for (size_t i = 0; i < spec.bases.size(); ++i)
      total = total + lambert_tail(spec.bases[i], frontier[i] - 1, per, lim);
    return total;
  }
};

}  // namespace

MergeCheck check_merge_condition(const std::vector<long>& bases) {
  check_bases(bases);
  Rat sum = 0;
  for (long t : bases) sum += Rat(1, t - 1);
  return {sum > 1, sum};
}

LambertMergeSpec make_merge_spec(const std::vector<long>& bases) {
  MergeCheck mc = check_merge_condition(bases);
  if (!mc.pass)
    throw Error("MergeConditionFails",
                "sum 1/(t_k-1) = " + to_frac(mc.sum) + " is not > 1");
  Rat eps(1, 2);
  long j = 1;
  while (!((1 - eps) * mc.sum > 1)) {
    eps /= 2;
    ++j;
    if (j > 512) throw Error("NoConvergence", "epsilon search exhausted");
  }
  return {bases, eps, j + 1};
}

std::vector<MergedTerm> merged_stream(const LambertMergeSpec& spec,
                                      long count) {
  if (count < 1) throw Error("BadArgument", "count >= 1");
  Stream st(spec);
  std::vector<MergedTerm> out;
  out.reserve(count);
  for (long i = 0; i < count; ++i) {
    HeapEntry h = st.pop();
    out.push_back({h.value, h.k, h.e});
  }
  return out;
}

Enclosure lambert_tail(long t, long from_exp, const Rat& width_goal,
                       const TailLimits& lim) {
  if (t < 2) throw Error("BadArgument", "base must be >= 2");
  if (from_exp < 0) throw Error("BadArgument", "from_exp >= 0");
  Rat partial = 0;
  for (long j = from_exp + 1; j <= from_exp + lim.max_terms; ++j) {
    partial += term_value(t, j);
    // 1/(t^l - 1) <= t^-l / (1 - t^-(j+1)) for l > j, so the rest is
    // geometric: at most (t^-j / (t-1)) / (1 - t^-(j+1)).
    Rat tj1 = pow_rat(Rat(t), j + 1);
    Rat remainder = pow_rat(Rat(t), -j) / (t - 1) / (1 - 1 / tj1);
    if (remainder <= width_goal)
      return Enclosure(partial, partial + remainder);
  }
  throw Error("NoConvergence", "lambert_tail width goal unreachable");
}

MergedSolution solve_merged(const LambertMergeSpec& spec, const Rat& q,
                            long steps, const TailLimits& lim) {
  if (steps < 1) throw Error("BadArgument", "steps >= 1");
  Stream st(spec);
  MergedSolution sol;
  sol.A.assign(spec.bases.size(), {});
  Rat r = q;
  if (r < 0)
    throw Error("TargetOutside", to_frac(q) + " is negative");

  for (long i = 0; i < steps; ++i) {
    if (r == 0) {
      sol.exact_hit = true;
      break;
    }
    // certified unreachable: residual above everything that is left
    Rat goal = r / (Rat(1) << 20);
    if (goal == 0) goal = Rat(1, Int(1) << 64);
    Enclosure rest = st.remaining(goal, lim);
    if (r > rest.hi)
      throw Error("TargetOutside",
                  "residual " + to_frac(r) + " exceeds remaining sum <= " +
                      to_frac(rest.hi));
    HeapEntry h = st.pop();
    ++sol.examined;
    if (h.value <= r) {
      sol.A[h.k - 1].push_back(h.e);
      r -= h.value;
    }
  }
  sol.residual = r;
  sol.residual_bound = st.heap.top().value;
  return sol;
}

long kakcond4_threshold(const LambertMergeSpec& spec, long search_cap,
                        const TailLimits& lim) {
  Stream st(spec);
  long from = -1;
  for (long n = 1; n <= search_cap; ++n) {
    HeapEntry h = st.pop();
    bool holds = false;
    Rat goal = h.value / 1024;
    for (int round = 0; round < 5 && !holds; ++round) {
      Enclosure rest = st.remaining(goal, lim);
      if (rest.lo >= h.value) holds = true;
      else if (rest.hi < h.value) break;
      goal /= Rat(1) << 16;
    }
    if (holds) {
      if (from < 0) from = n;
    } else {
      from = -1;
    }
  }
  if (from < 0)
    throw Error("NoThreshold", "condition never stabilizes by index " +
                                   std::to_string(search_cap));
  // Past the cap the condition follows from (1-eps) * sum 1/(t_k-1) > 1
  // once every base has shed its first N0 exponents; make sure the checked
  // range really reaches that regime.
  if (!((1 - spec.epsilon) * check_merge_condition(spec.bases).sum > 1))
    throw Error("CertificateViolated", "epsilon no longer valid");
  for (long f : st.frontier)
    if (f <= spec.N0)
      throw Error("NoThreshold",
                  "search cap too small: a base frontier is still <= N0");
  return from;
}

std::vector<bool> cantor_check(long t, long horizon) {
  if (t < 2) throw Error("BadArgument", "base must be >= 2");
  std::vector<bool> out;
  out.reserve(horizon);
  for (long n = 1; n <= horizon; ++n) {
    Rat target = term_value(t, n);
    Enclosure tail = lambert_tail(t, n, target / 1024);
    out.push_back(tail.hi < target);
  }
  return out;
}

}  // namespace ahmes
