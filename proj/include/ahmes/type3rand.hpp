#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ahmes/series.hpp"

namespace ahmes {

// Exactly evaluable growth function F(n) > 0.
struct GrowthFunction {
  std::string name;
  std::function<Rat(long)> F;
};

namespace growths {
GrowthFunction factorial();  // n!
GrowthFunction pow2();       // 2^n, not super-exponential (for failure paths)
GrowthFunction by_name(const std::string& name);
}  // namespace growths

// c_1 = 0, c_n = min{ floor(sqrt(F(n))), floor(F(n)/F(n-1)) } for n >= 2.
// The square root is taken as isqrt(floor(F(n))); that is exact for
// integer-valued F and is our fixed convention for rational-valued F.
Int default_c(const GrowthFunction& F, long n);

struct RandomPlan {
  std::function<Int(long)> c;
  long n0 = 0;
  std::uint64_t seed = 0;
};

// Least n0 such that for every n0 <= n <= up_to:
//   F(n) >= 2 c_n > 0,
//   F(n) >= n  and  F(n+1) >= F(n) + c_n + 1,
//   48 c_{n+1} + 1 < (F(n+1)/F(n))^2.
// The last one telescopes into the tail bound
//   sum_{k>n} 48 c_k / F(k)^2 < 1/F(n)^2,
// which is re-verified as partial-sum certificates before returning.
// Throws NoN0 when no such index exists by up_to.
long certify_plan(const GrowthFunction& F, const std::function<Int(long)>& c,
                  long up_to);

// Deterministic counter-based sampler: value depends only on (seed, n).
std::uint64_t mix64(std::uint64_t seed, std::uint64_t n);

// a_n = n for n < n0, otherwise floor(F(n)) + uniform{1..c_n}; strict
// monotonicity is asserted, not assumed.
std::vector<Int> sample_sequence(const RandomPlan& plan,
                                 const GrowthFunction& F, long count);

// Certified positive lower bound for
//   |sum_k 1/(floor F(m+k) + d_k) - sum_k 1/(floor F(m+k) + d'_k)|
// over all continuations with offsets in (-c, 2c]: exact signed prefix
// difference minus the tail majorant (1/4)/F(m+len-1)^2.  The sign is
// fixed by the first disagreement.  Requires m >= certified n0.
Rat verify_separation(const GrowthFunction& F,
                      const std::function<Int(long)>& c, long m,
                      const std::vector<Int>& d, const std::vector<Int>& dp);

}  // namespace ahmes
