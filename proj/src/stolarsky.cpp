#include "ahmes/stolarsky.hpp"

#include <deque>
#include <map>
#include <memory>
#include <numeric>

namespace ahmes {
namespace {

Rat rpow(const Rat& x, long e) { return pow_rat(x, e); }

Int fact(long n) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace

std::vector<Rat> enumerate_rationals(long count) {
  std::vector<Rat> out;
  if (count <= 0) return out;
  out.push_back(Rat(0));
  std::deque<Rat> pending;
  long s = 2;
  auto refill = [&]() {
    for (long num = 1; num < s; ++num) {
      if (std::gcd(num, s - num) != 1) continue;
      Rat q(num, s - num);
      pending.push_back(q);
      pending.push_back(-q);
    }
    ++s;
  };
  for (long i = 2; i <= count; ++i) {
    bool placed = false;
    while (!placed) {
      for (auto it = pending.begin(); it != pending.end(); ++it)
        if (abs(*it) <= i) {
          out.push_back(*it);
          pending.erase(it);
          placed = true;
          break;
        }
      if (!placed) refill();
    }
  }
  return out;
}

long StolarskySchedule::d_at(long k) const {
  long d = 0;
  while (d < long(m.size()) && m[d] <= k) ++d;
  return d;
}

namespace {

Rat transfer_lhs(const StolarskySchedule& s, const Int& Ddv, long k, long i) {
  Rat Nk(s.N(k)), Mk(s.M(k));
  return Rat(Ddv) * (1 / rpow(Nk, i + 1) + Mk * Mk / rpow(Nk, i + 2));
}

Rat transfer_rhs(const StolarskySchedule& s, const Rat& eps, long k, long i) {
  return eps * Rat(s.M(k + 1)) / rpow(Rat(s.N(k + 1)), i + 1);
}

}  // namespace

StolarskySchedule make_schedule(ScheduleMode mode, long max_d,
                                long depth_cap) {
  if (max_d < 1) throw Error("BadArgument", "max_d >= 1");
  StolarskySchedule s;
  s.mode = mode;
  s.max_d = max_d;
  s.depth_cap = depth_cap;
  if (mode == ScheduleMode::Paper) {
    // exact crossover where the doubly exponential branch overtakes the
    // factorial one, keeping N monotone across the switch
    long k = 3;
    while (k <= 200 && floor_pow2_pow2_sqrt(k) < fact(2 * k - 1)) ++k;
    if (k > 200) throw Error("NoConvergence", "branch crossover not found");
    s.k0 = k - 1;
  }
  ScheduleMode md = mode;
  long k0 = s.k0, cap = depth_cap;
  auto memo = std::make_shared<std::map<long, Int>>();
  s.N = [md, k0, cap, memo](long k) -> Int {
    if (k < 1) throw Error("BadArgument", "k >= 1");
    if (k > cap) throw Error("DepthTooLarge", "stage index past the cap");
    auto it = memo->find(k);
    if (it != memo->end()) return it->second;
    Int v;
    if (md == ScheduleMode::Demo)
      v = fact(2 * k - 1) * (Int(1) << (2 * k));
    else
      v = k <= k0 ? fact(2 * k - 1) : floor_pow2_pow2_sqrt(k);
    return memo->emplace(k, v).first->second;
  };
  auto Nf = s.N;
  s.M = [Nf](long k) -> Int {
    Int n = Nf(k);
    Int a = n / (4 * k), b = isqrt(n);
    return a < b ? a : b;
  };
  for (long d = 1; d <= max_d; ++d) {
    s.vds.push_back(vandermonde_data(d));
    Int dd = d * s.vds.back().v_d;
    if (Int two_c = Int(1) << (10 * d + 1); two_c > dd) dd = two_c;
    s.Dd.push_back(dd);
  }
  long window = 8, prev = 0;
  for (long d = 1; d <= max_d; ++d) {
    const Rat& eps = s.vds[d - 1].eps;
    long found = -1;
    for (long mc = prev + 1; mc + window + 1 < depth_cap && found < 0; ++mc) {
      bool ok = true;
      // the boundary stage still runs in the old dimension but must land
      // inside the new, smaller box
      if (d > 1)
        for (long i = 1; ok && i < d; ++i)
          ok = transfer_lhs(s, s.Dd[d - 2], mc - 1, i) <=
               transfer_rhs(s, eps, mc - 1, i);
      for (long k = mc; ok && k <= mc + window; ++k)
        for (long i = 1; ok && i <= d; ++i)
          ok = transfer_lhs(s, s.Dd[d - 1], k, i) <=
               transfer_rhs(s, eps, k, i);
      for (long i = 1; ok && i <= d; ++i)
        for (long k = mc + window - 2; ok && k < mc + window; ++k) {
          Rat r1 = transfer_lhs(s, s.Dd[d - 1], k, i) /
                   transfer_rhs(s, eps, k, i);
          Rat r2 = transfer_lhs(s, s.Dd[d - 1], k + 1, i) /
                   transfer_rhs(s, eps, k + 1, i);
          ok = r2 < r1;
        }
      if (ok) found = mc;
    }
    if (found < 0) throw Error("NoStage", "activation stage not found");
    s.m.push_back(found);
    prev = found;
  }
  return s;
}

namespace {

ShiftSystem rational_shifts(long max_d) {
  auto ts = enumerate_rationals(max_d);
  return {"rational-shifts",
          [ts](long i) -> Rat { return ts.at(size_t(i - 1)); }};
}

// one stage of coordinate i's series: sum over j <= d(l) of f_i(j N_l)
TermSpec coord_spec(const StolarskySchedule& s, const ShiftSystem& sys,
                    long i) {
  auto Nf = s.N;
  auto dat = [s](long l) -> long { return s.d_at(l); };
  return {"stolarsky-tail(i=" + std::to_string(i) + ")",
          [sys, Nf, dat, i](long l) -> Rat {
            Rat sum = 0;
            long dl = dat(l);
            for (long j = 1; j <= dl; ++j)
              sum += f_eval(sys, i, Rat(j) * Rat(Nf(l)));
            return sum;
          },
          DecayCertificate{Rat(2, 3), s.m.front()},
          {}};
}

Rat box_radius(const StolarskySchedule& s, long k, long i) {
  long dk = s.d_at(k);
  if (dk < 1) dk = 1;
  if (dk > s.max_d) dk = s.max_d;
  return s.vds[dk - 1].eps * Rat(s.M(k)) / pow_rat(Rat(s.N(k)), i + 1);
}

}  // namespace

StolarskyState run_stolarsky(const StolarskySchedule& sched, long extra,
                             const TailLimits& lim) {
  if (extra < 1) throw Error("BadArgument", "extra >= 1");
  ShiftSystem sys = rational_shifts(sched.max_d);
  std::vector<TermSpec> specs;
  for (long i = 1; i <= sched.max_d; ++i)
    specs.push_back(coord_spec(sched, sys, i));

  StolarskyState st;
  st.start = sched.m.front();
  long end = sched.m.back() + extra;
  for (long k = st.start; k < end; ++k) {
    long dk = sched.d_at(k), dk1 = sched.d_at(k + 1);
    if (dk1 > sched.max_d) dk1 = sched.max_d;
    while (long(st.targets.size()) < dk) {
      long i = long(st.targets.size()) + 1;
      Rat delta = box_radius(sched, k, i);
      Enclosure T =
          tail_enclosure(specs[i - 1], k, delta / (Int(1) << 20), lim);
      Rat x = pick_dyadic(T.hi - delta, T.lo + delta);
      st.targets.push_back(x);
      st.partial.push_back(Rat(0));
      st.residual.push_back(Rat(x) - T);
      st.box.push_back(delta);
    }
    for (long i = 1; i <= dk; ++i)
      if (!(transfer_lhs(sched, sched.Dd[dk - 1], k, i) <=
            transfer_rhs(sched, sched.vds[dk1 - 1].eps, k, i)))
        throw Error("StageConditionUnmet",
                    "transfer inequality fails at stage " + std::to_string(k));
    if (!(sched.N(k + 1) >= (2 * dk1 + 1) * sched.N(k)))
      throw Error("CertificateViolated", "N growth too slow");

    Int Nk = sched.N(k), Mk = sched.M(k);
    std::vector<Rat> w(dk);
    std::vector<Enclosure> nextT(dk, Enclosure{0, 0});
    for (long i = 1; i <= dk; ++i) {
      Rat delta = box_radius(sched, k, i);
      Rat deltan = sched.vds[dk1 - 1].eps * Rat(sched.M(k + 1)) /
                   rpow(Rat(sched.N(k + 1)), i + 1);
      nextT[i - 1] =
          tail_enclosure(specs[i - 1], k + 1, deltan / (Int(1) << 30), lim);
      Rat sk = specs[i - 1].at(k);
      Enclosure W = nextT[i - 1] + sk + st.partial[i - 1] - st.targets[i - 1];
      Rat mid = W.mid();
      if (mid > delta) mid = delta;
      if (mid < -delta) mid = -delta;
      w[i - 1] = mid;
    }
    std::vector<Int> n = lattice_approx(sched.vds[dk - 1], Nk, Mk, w);
    for (long j = 1; j <= dk; ++j) {
      Int a = j * Nk + n[j - 1];
      if (!st.emitted.empty() && a <= st.emitted.back())
        throw Error("InvariantBreach", "emitted terms not increasing");
      st.emitted.push_back(a);
    }
    for (long i = 1; i <= dk; ++i) {
      for (long j = 1; j <= dk; ++j)
        st.partial[i - 1] +=
            f_eval(sys, i, Rat(j) * Rat(Nk) + Rat(n[j - 1]));
      Rat deltan = sched.vds[dk1 - 1].eps * Rat(sched.M(k + 1)) /
                   rpow(Rat(sched.N(k + 1)), i + 1);
      Enclosure E =
          Rat(st.targets[i - 1]) - st.partial[i - 1] - nextT[i - 1];
      if (!(E.lo >= -deltan && E.hi <= deltan))
        throw Error("InvariantBreach",
                    "membership lost at stage " + std::to_string(k));
      st.residual[i - 1] = E;
      st.box[i - 1] = deltan;
    }
  }
  st.k = end;
  return st;
}

Rat verify_state(const StolarskySchedule& sched, const StolarskyState& st,
                 const TailLimits& lim) {
  if (st.targets.empty() || st.k <= st.start)
    throw Error("InvariantBreach", "empty state");
  ShiftSystem sys = rational_shifts(sched.max_d);
  long active = long(st.targets.size());
  std::vector<Rat> partial(active, Rat(0));
  size_t idx = 0;
  Int last = 0;
  for (long l = st.start; l < st.k; ++l) {
    long dl = sched.d_at(l);
    if (dl > active)
      throw Error("InvariantBreach", "more coordinates active than targets");
    Int Nl = sched.N(l), Ml = sched.M(l);
    for (long j = 1; j <= dl; ++j) {
      if (idx >= st.emitted.size())
        throw Error("InvariantBreach", "too few emitted terms");
      Int a = st.emitted[idx++];
      if (a <= last) throw Error("InvariantBreach", "terms not increasing");
      last = a;
      Int off = a - j * Nl;
      if (abs(off) > Ml)
        throw Error("InvariantBreach", "offset outside the lattice box");
      for (long i = 1; i <= dl; ++i)
        partial[i - 1] += f_eval(sys, i, Rat(a));
    }
  }
  if (idx != st.emitted.size())
    throw Error("InvariantBreach", "extra emitted terms");
  for (long i = 1; i <= active; ++i)
    if (partial[i - 1] != st.partial[i - 1])
      throw Error("InvariantBreach", "recorded partial sums differ");
  Rat worst = 1;
  for (long i = 1; i <= active; ++i) {
    Rat delta = box_radius(sched, st.k, i);
    Enclosure T = tail_enclosure(coord_spec(sched, sys, i), st.k,
                                 delta / (Int(1) << 20), lim);
    Enclosure E = Rat(st.targets[i - 1]) - partial[i - 1] - T;
    Rat reach = abs(E.lo) > abs(E.hi) ? abs(E.lo) : abs(E.hi);
    if (!(reach <= delta))
      throw Error("InvariantBreach", "membership lost on recheck");
    Rat margin = (delta - reach) / delta;
    if (margin < worst) worst = margin;
  }
  return worst;
}

}  // namespace ahmes
