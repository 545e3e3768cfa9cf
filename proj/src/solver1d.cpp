#include "ahmes/solver1d.hpp"

#include <map>
#include <memory>

namespace ahmes {
namespace {

// Empirical decay certificate: probe term ratios on [1, H], declare the
// worst ratio past the last non-decreasing index.  Dishonest declarations
// are caught later by the per-index checks in tail_enclosure.
DecayCertificate probe_decay(const std::string& name,
                             const std::function<Rat(long)>& f, long H) {
  std::vector<Rat> v(H + 2);
  for (long n = 1; n <= H + 1; ++n) v[n] = f(n);
  long from = 1;
  for (long n = 1; n <= H; ++n)
    if (v[n] <= 0 || v[n + 1] >= v[n]) from = n + 1;
  if (from > H) throw Error("NoDecay", name + ": no decaying range by index " +
                                           std::to_string(H));
  Rat worst = 0;
  for (long n = from; n <= H; ++n) {
    Rat r = v[n + 1] / v[n];
    if (r > worst) worst = r;
  }
  if (worst >= 1) throw Error("NoDecay", name + ": ratio >= 1 on probe range");
  return {worst, from};
}

Rat cover_rhs(const IntervalSchedule& s, long n) {
  Rat jmin(s.min_at(n));
  return 1 / (jmin * (jmin + 1));
}

// First probed index from which the single-term dominance
// gap(n+1) >= 1/(min J_n (min J_n + 1)) holds through the horizon.
long probe_dominance(const IntervalSchedule& s, long H) {
  long from = -1;
  for (long n = 1; n <= H; ++n) {
    if (s.gap.at(n + 1) >= cover_rhs(s, n)) {
      if (from < 0) from = n;
    } else {
      from = -1;
    }
  }
  return from;
}

struct Membership {
  Enclosure lo;  // encloses inf I_n = sum_{k>=n} 1/max J_k
  Enclosure hi;  // encloses sup I_n = sum_{k>=n} 1/min J_k
  int verdict;   // 1 in, -1 out, 0 undecided
};

Membership certify_membership(const IntervalSchedule& s, long n, const Rat& r,
                              const TailLimits& lim) {
  Rat goal = Rat(1, 1024) / (Rat(s.min_at(n)) * s.min_at(n));
  Membership m{};
  for (int round = 0; round < 5; ++round) {
    m.lo = tail_enclosure(s.inv_max, n, goal, lim);
    m.hi = tail_enclosure(s.inv_min, n, goal, lim);
    if (r >= m.lo.hi && r <= m.hi.lo) { m.verdict = 1; return m; }
    if (r < m.lo.lo || r > m.hi.hi) { m.verdict = -1; return m; }
    if (m.lo.is_point() && m.hi.is_point()) break;  // no more refinement
    goal /= Rat(1) << 16;
  }
  m.verdict = 0;
  return m;
}

}  // namespace

CoverStatus verify_cover_condition(const IntervalSchedule& s, long n,
                                   const TailLimits& lim) {
  Rat rhs = cover_rhs(s, n);
  Rat goal = rhs / 1024;
  for (int round = 0; round < 5; ++round) {
    Enclosure lhs = tail_enclosure(s.gap, n + 1, goal, lim);
    if (lhs.lo >= rhs) return CoverStatus::Holds;
    if (lhs.hi < rhs) return CoverStatus::Fails;
    if (lhs.is_point()) return CoverStatus::Fails;  // exact, and short
    goal /= Rat(1) << 16;
  }
  return CoverStatus::Undecided;
}

long find_threshold(const IntervalSchedule& s, long search_cap,
                    const TailLimits& lim) {
  if (s.cover_certified_from < 0)
    throw Error("NoThreshold",
                s.name + ": nothing certifies the covering condition beyond "
                         "the checked range");
  if (s.cover_certified_from > search_cap + 1)
    throw Error("NoThreshold", s.name + ": certificate starts past cap " +
                                   std::to_string(search_cap));
  long m = -1;
  for (long n = 1; n <= search_cap; ++n) {
    CoverStatus st;
    try {
      st = verify_cover_condition(s, n, lim);
    } catch (const Error&) {
      throw Error("NoThreshold",
                  s.name + ": covering at index " + std::to_string(n) +
                      " cannot be certified");
    }
    if (st == CoverStatus::Holds) {
      if (m < 0) m = n;
    } else {
      m = -1;
    }
  }
  if (m < 0)
    throw Error("NoThreshold",
                s.name + ": covering never stabilizes by index " +
                    std::to_string(search_cap));
  for (long c : s.clamped)
    if (c >= m) m = c + 1;
  return m;
}

Window target_window(const IntervalSchedule& s, long m, const Rat& width_goal,
                     const TailLimits& lim) {
  Rat head = 0;
  for (long n = 1; n < m; ++n) head += Rat(1) / s.min_at(n);
  return {tail_enclosure(s.inv_max, m, width_goal, lim) + head,
          tail_enclosure(s.inv_min, m, width_goal, lim) + head};
}

WindowState solve_stream(const IntervalSchedule& s, long m, const Rat& q,
                         long steps, const TailLimits& lim) {
  WindowState st;
  st.m = m;
  for (long n = 1; n < m; ++n) {
    Int x = s.min_at(n);
    st.emitted.push_back(x);
    st.partial += Rat(1) / x;
  }
  st.residual = q - st.partial;

  Membership mem = certify_membership(s, m, st.residual, lim);
  if (mem.verdict < 0)
    throw Error("TargetOutsideWindow", to_frac(q) + " is certified outside " +
                                           s.name + "'s window at index " +
                                           std::to_string(m));
  if (mem.verdict == 0)
    throw Error("MembershipUndecided",
                "cannot place " + to_frac(q) + " relative to the window");

  for (long n = m; n < m + steps; ++n) {
    Int jmin = s.min_at(n), jmax = s.max_at(n);
    Int pick = 0;
    Rat goal = Rat(1, 1024) / (Rat(jmin) * jmin);
    for (int round = 0; round < 6 && pick == 0; ++round) {
      Enclosure next_lo = tail_enclosure(s.inv_max, n + 1, goal, lim);
      Enclosure next_hi = tail_enclosure(s.inv_min, n + 1, goal, lim);
      // Smallest j in J_n with residual - 1/j still >= inf I_{n+1}; then
      // residual - 1/j <= sup I_{n+1} must hold too (j larger only raises
      // the new residual, so smaller picks were infeasible anyway).
      Rat room = st.residual - next_lo.hi;
      if (room > 0) {
        Int j = ceil_rat(1 / room);
        if (j < jmin) j = jmin;
        if (j <= jmax && st.residual - Rat(1) / j <= next_hi.lo) {
          pick = j;
          mem.lo = next_lo;
          mem.hi = next_hi;
          break;
        }
      }
      if (next_lo.is_point() && next_hi.is_point()) break;
      goal /= Rat(1) << 16;
    }
    if (pick == 0)
      throw Error("SelectionStuck", s.name + ": no certified choice in J_" +
                                        std::to_string(n));
    st.emitted.push_back(pick);
    st.partial += Rat(1) / pick;
    st.residual -= Rat(1) / pick;
  }
  st.window_lo = mem.lo;
  st.window_hi = mem.hi;
  return st;
}

namespace {

// Shared memo so the three TermSpecs of a schedule evaluate a_n once.
struct SeqMemo {
  std::function<Int(long)> raw;
  std::map<long, Int> cache;
  Int at(long n) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Int v = raw(n);
    if (v < 1) throw Error("BadSequence", "a_n < 1 at n=" + std::to_string(n));
    auto prev = cache.find(n - 1);
    if (prev != cache.end() && v <= prev->second)
      throw Error("BadSequence", "not strictly increasing at n=" + std::to_string(n));
    return cache.emplace(n, v).first->second;
  }
};

IntervalSchedule finish_schedule(std::string name,
                                 std::function<std::pair<Int, Int>(long)> J,
                                 long probe_horizon) {
  IntervalSchedule s;
  s.name = std::move(name);
  s.J = std::move(J);
  auto J2 = s.J;
  s.inv_min = {s.name + ".inv_min",
               [J2](long n) -> Rat { return Rat(1) / J2(n).first; }, {}, {}};
  s.inv_max = {s.name + ".inv_max",
               [J2](long n) -> Rat { return Rat(1) / J2(n).second; }, {}, {}};
  s.gap = {s.name + ".gap",
           [J2](long n) -> Rat {
             auto [a, b] = J2(n);
             return Rat(1) / a - Rat(1) / b;
           },
           {}, {}};
  // a series that refuses to decay on the probed range simply gets no
  // certificate; threshold queries on it fail later instead of here
  auto probe = [&](TermSpec& spec) {
    try {
      spec.decay = probe_decay(spec.name, spec.term, probe_horizon);
    } catch (const Error&) {
    }
  };
  probe(s.inv_min);
  probe(s.inv_max);
  probe(s.gap);
  s.cover_certified_from = probe_dominance(s, probe_horizon);
  return s;
}

}  // namespace

IntervalSchedule type2_schedule(const IntSeq& a, long probe_horizon) {
  auto memo = std::make_shared<SeqMemo>(SeqMemo{a.term, {}});
  auto J = [memo](long n) -> std::pair<Int, Int> {
    Int an = memo->at(n);
    Int c = n == 1 ? Int(1) : Int(isqrt(an * an * an) / memo->at(n - 1) + 1);
    Int lo = an - c;
    if (lo < 1) lo = 1;
    return {lo, an};
  };
  IntervalSchedule s = finish_schedule("type2(" + a.name + ")", J, probe_horizon);
  for (long n = 1; n <= probe_horizon; ++n) {
    auto [lo, hi] = s.J(n);
    Int an = memo->at(n);
    Int c = n == 1 ? Int(1) : Int(isqrt(an * an * an) / memo->at(n - 1) + 1);
    if (an - c < 1) s.clamped.push_back(n);
  }
  return s;
}

IntervalSchedule type3_schedule(const IntSeq& a, const Int& C, long horizon,
                                const TailLimits& lim) {
  if (C < 1) throw Error("CUnsupported", "need C >= 1");
  auto memo = std::make_shared<SeqMemo>(SeqMemo{a.term, {}});
  // Per-index certificate: 1/a_n^2 <= C * sum_{k>n} 1/a_k^2.  With an
  // exact square tail this is an exact comparison; otherwise a partial
  // sum of the tail is a valid lower bound for the right side.
  for (long n = 1; n <= horizon; ++n) {
    Rat lhs = Rat(1) / (Rat(memo->at(n)) * memo->at(n));
    Rat rhs_lower = 0;
    bool ok = false;
    if (a.exact_tail_sq) {
      ok = lhs <= Rat(C) * a.exact_tail_sq(n);
    } else {
      for (long k = n + 1; k <= n + lim.max_terms && !ok; ++k) {
        Rat term = Rat(1) / (Rat(memo->at(k)) * memo->at(k));
        rhs_lower += term;
        ok = lhs <= Rat(C) * rhs_lower;
        // terms are decreasing, so even max_terms more copies of the
        // current one cannot rescue a sum this far behind
        if (!ok && Rat(C) * (rhs_lower + Rat(lim.max_terms) * term) < lhs)
          break;
      }
    }
    if (!ok)
      throw Error("CUnsupported", a.name + ": 1/a_n^2 <= C*tail fails at n=" +
                                      std::to_string(n) + " with C=" +
                                      C.get_str());
  }
  Int off = 4 * C + 1;
  auto J = [memo, off](long n) -> std::pair<Int, Int> {
    Int an = memo->at(n);
    return {an + 1, an + off};
  };
  return finish_schedule(
      "type3(" + a.name + ",C=" + C.get_str() + ")", J,
      std::min<long>(horizon, 16));
}

Int minimal_type3_C(const IntSeq& a, long horizon) {
  if (!a.exact_tail_sq)
    throw Error("CUnsupported",
                a.name + ": minimal C needs an exact square tail");
  Int best = 1;
  for (long n = 1; n <= horizon; ++n) {
    Rat an(a.term(n));
    Int c = ceil_rat(1 / (an * an * a.exact_tail_sq(n)));
    if (c > best) best = c;
  }
  return best;
}

namespace schedules {

IntervalSchedule pow2_offsets5_full() {
  auto J = [](long n) -> std::pair<Int, Int> {
    Int p = Int(1) << n;
    return {p + 1, p + 5};
  };
  return finish_schedule("pow2-offsets5-full", J, 16);
}

IntervalSchedule pow2_offsets5() {
  auto J = [](long n) -> std::pair<Int, Int> {
    Int p = Int(1) << n;
    if (n <= 3) return {p + 1, p + 1};
    return {p + 1, p + 5};
  };
  IntervalSchedule s;
  s.name = "pow2-offsets5";
  s.J = J;
  s.inv_min = {"pow2-offsets5.inv_min",
               [](long n) -> Rat { return Rat(1) / ((Int(1) << n) + 1); },
               DecayCertificate{Rat(3, 5), 1}, {}};
  s.inv_max = {"pow2-offsets5.inv_max",
               [J](long n) -> Rat { return Rat(1) / J(n).second; },
               DecayCertificate{Rat(7, 9), 1}, {}};
  s.gap = {"pow2-offsets5.gap",
           [J](long n) -> Rat {
             auto [a, b] = J(n);
             return Rat(1) / a - Rat(1) / b;
           },
           DecayCertificate{Rat(7, 15), 4}, {}};
  // gap(n+1) >= 1/((2^n+1)(2^n+2)) reduces to
  // 4*4^n + 12*2^n + 8 >= 4*4^n + 12*2^n + 5, true for every n >= 4.
  s.cover_certified_from = 4;
  return s;
}

IntervalSchedule pow2_singleton() {
  IntervalSchedule s;
  s.name = "pow2-singleton";
  s.J = [](long n) -> std::pair<Int, Int> {
    Int p = Int(1) << n;
    return {p, p};
  };
  TermSpec inv{"pow2-singleton.inv",
               [](long n) -> Rat { return pow_rat(Rat(1, 2), n); },
               DecayCertificate{Rat(1, 2), 1},
               [](long n) -> Rat { return pow_rat(Rat(1, 2), n - 1); }};
  s.inv_min = inv;
  s.inv_max = inv;
  s.gap = {"pow2-singleton.gap", [](long) -> Rat { return Rat(0); }, {},
           [](long) -> Rat { return Rat(0); }};
  s.cover_certified_from = -1;  // covering fails at every index
  return s;
}

IntervalSchedule triangular_singleton() {
  IntervalSchedule s;
  s.name = "triangular-singleton";
  s.J = [](long n) -> std::pair<Int, Int> {
    Int t = Int(n) * (n + 1);
    return {t, t};
  };
  TermSpec inv{"triangular-singleton.inv",
               [](long n) -> Rat { return Rat(1, n) - Rat(1, n + 1); }, {},
               [](long n) -> Rat { return Rat(1, n); }};
  s.inv_min = inv;
  s.inv_max = inv;
  s.gap = {"triangular-singleton.gap", [](long) -> Rat { return Rat(0); }, {},
           [](long) -> Rat { return Rat(0); }};
  s.cover_certified_from = -1;
  return s;
}

IntervalSchedule by_name(const std::string& name) {
  if (name == "pow2-offsets5") return pow2_offsets5();
  if (name == "pow2-offsets5-full") return pow2_offsets5_full();
  if (name == "pow2-singleton") return pow2_singleton();
  if (name == "triangular-singleton") return triangular_singleton();
  throw Error("UnknownSchedule", name);
}

}  // namespace schedules

namespace seqs {

IntSeq pow2() {
  return {"pow2", [](long n) -> Int { return Int(1) << n; },
          [](long n) -> Rat { return pow_rat(Rat(1, 4), n) / 3; }};
}

IntSeq pow2_doubleexp() {
  return {"pow2-doubleexp",
          [](long n) -> Int {
            if (n < 0 || n > 40) throw Error("Overflow", "2^(2^n) too large");
            return Int(1) << (1L << n);
          },
          {}};
}

IntSeq pow_19_10() {
  return {"pow2-of-1.9^n",
          [](long n) -> Int { return floor_pow2(pow_rat(Rat(19, 10), n)); },
          {}};
}

}  // namespace seqs

}  // namespace ahmes
