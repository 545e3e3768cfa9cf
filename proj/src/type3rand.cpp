#include "ahmes/type3rand.hpp"

namespace ahmes {

namespace growths {

GrowthFunction factorial() {
  return {"factorial", [](long n) -> Rat {
            if (n < 1) throw Error("BadArgument", "n >= 1");
            Int f;
            mpz_fac_ui(f.get_mpz_t(), n);
            return Rat(f);
          }};
}

GrowthFunction pow2() {
  return {"pow2", [](long n) -> Rat {
            if (n < 1) throw Error("BadArgument", "n >= 1");
            return Rat(Int(Int(1) << n));
          }};
}

GrowthFunction by_name(const std::string& name) {
  if (name == "factorial") return factorial();
  if (name == "pow2") return pow2();
  throw Error("UnknownGrowth", name);
}

}  // namespace growths

Int default_c(const GrowthFunction& F, long n) {
  if (n < 1) throw Error("BadArgument", "n >= 1");
  if (n == 1) return 0;
  Int root = isqrt(floor_rat(F.F(n)));
  Int quot = floor_rat(F.F(n) / F.F(n - 1));
  return root < quot ? root : quot;
}

long certify_plan(const GrowthFunction& F, const std::function<Int(long)>& c,
                  long up_to) {
  if (up_to < 1) throw Error("BadArgument", "up_to >= 1");
  long n0 = 1;
  std::vector<Rat> Fv(up_to + 2), cv(up_to + 2);
  for (long n = 1; n <= up_to + 1; ++n) {
    Fv[n] = F.F(n);
    cv[n] = Rat(c(n));
    if (Fv[n] <= 0) throw Error("BadArgument", F.name + " not positive");
    if (cv[n] < 0) throw Error("BadArgument", "c_n negative");
  }
  for (long n = 1; n <= up_to; ++n) {
    bool fb4 = Fv[n] >= 2 * cv[n] && cv[n] > 0;
    bool fa4 = Fv[n] >= n && Fv[n + 1] >= Fv[n] + cv[n] + 1;
    Rat ratio = Fv[n + 1] / Fv[n];
    bool fa9 = 48 * cv[n + 1] + 1 < ratio * ratio;
    if (!(fb4 && fa4 && fa9)) n0 = n + 1;
  }
  if (n0 > up_to)
    throw Error("NoN0", F.name + ": conditions never stabilize by " +
                            std::to_string(up_to));
  // telescoped consequence as partial-sum certificates on the checked range
  for (long n = n0; n <= up_to; ++n) {
    Rat bound = 1 / (Fv[n] * Fv[n]);
    Rat partial = 0;
    for (long k = n + 1; k <= up_to + 1; ++k) {
      partial += 48 * cv[k] / (Fv[k] * Fv[k]);
      if (partial >= bound)
        throw Error("CertificateViolated",
                    "telescoped tail bound fails at n=" + std::to_string(n));
    }
  }
  return n0;
}

std::uint64_t mix64(std::uint64_t seed, std::uint64_t n) {
  // splitmix64 step keyed by (seed, n)
  std::uint64_t z = seed + n * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

static Int uniform_in(std::uint64_t seed, long n, const Int& c) {
  // enough 64-bit words for c, then reduce; c is a modulus, bias across
  // c far below any reproducibility concern here since values are part
  // of the published output, not statistics
  size_t words = (bit_length(c) + 63) / 64 + 1;
  Int acc = 0;
  for (size_t w = 0; w < words; ++w) {
    acc <<= 64;
    acc += Int(mix64(seed, (std::uint64_t(n) << 8) + w));
  }
  return acc % c + 1;
}

std::vector<Int> sample_sequence(const RandomPlan& plan,
                                 const GrowthFunction& F, long count) {
  if (plan.n0 < 1) throw Error("BadArgument", "plan not certified");
  std::vector<Int> out;
  out.reserve(count);
  for (long n = 1; n <= count; ++n) {
    Int a;
    if (n < plan.n0) {
      a = n;
    } else {
      Int cn = plan.c(n);
      if (cn < 1) throw Error("CertificateViolated", "c_n < 1 past n0");
      a = floor_rat(F.F(n)) + uniform_in(plan.seed, n, cn);
    }
    if (!out.empty() && a <= out.back())
      throw Error("CertificateViolated",
                  "sampled sequence not increasing at n=" + std::to_string(n));
    out.push_back(a);
  }
  return out;
}

Rat verify_separation(const GrowthFunction& F,
                      const std::function<Int(long)>& c, long m,
                      const std::vector<Int>& d, const std::vector<Int>& dp) {
  if (d.size() != dp.size() || d.empty())
    throw Error("BadArgument", "offset prefixes must have equal length >= 1");
  if (d == dp) throw Error("OffsetsEqual", "prefixes coincide");
  long L = long(d.size());
  long first = -1;
  for (long j = 0; j < L; ++j) {
    Int cj = c(m + j);
    auto in_range = [&](const Int& x) { return -cj < x && x <= 2 * cj; };
    if (!in_range(d[j]) || !in_range(dp[j]))
      throw Error("OffsetsOutOfRange",
                  "offset at index " + std::to_string(m + j) +
                      " outside (-c, 2c]");
    if (first < 0 && d[j] != dp[j]) first = j;
  }
  Rat diff = 0;
  for (long j = 0; j < L; ++j) {
    Int fl = floor_rat(F.F(m + j));
    diff += Rat(1) / Rat(fl + d[j]) - Rat(1) / Rat(fl + dp[j]);
  }
  if (d[first] > dp[first]) diff = -diff;  // orient: smaller offset wins
  // Any continuation past the prefix moves the difference by at most
  // sum_{k>m+L-1} 12 c_k / F(k)^2 < (1/4) / F(m+L-1)^2, using the
  // telescoped bound; spot-check its per-index form where the tail starts.
  Rat FK = F.F(m + L - 1);
  for (long k = m + L; k < m + L + 4; ++k) {
    Rat r = F.F(k) / F.F(k - 1);
    if (!(48 * Rat(c(k)) + 1 < r * r))
      throw Error("CertificateViolated",
                  "growth certificate fails at k=" + std::to_string(k));
  }
  Rat gap = diff - Rat(1, 4) / (FK * FK);
  if (!(gap > 0))
    throw Error("SeparationUndecided",
                "prefix too short to certify a positive gap");
  return gap;
}

}  // namespace ahmes
