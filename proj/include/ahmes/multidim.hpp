#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ahmes/series.hpp"

namespace ahmes {

using Mat = std::vector<std::vector<Rat>>;

Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_inverse(const Mat& A);  // exact Gauss-Jordan, throws SingularMatrix

// Shift sequence t_i (|t_i| <= i) defining the product functions
// f_i(x) = 1 / prod_{j<=i} (x + t_j), with value 0 at the poles.
struct ShiftSystem {
  std::string name;
  std::function<Rat(long)> t;
};
ShiftSystem integer_shifts();  // t_i = i - 1

Rat f_eval(const ShiftSystem& sys, long i, const Rat& x);

// Coefficients of 1/prod(x+t_j) = sum_j m_j/(x+t_j); the explicit product
// formula, cross-checked by evaluating both sides at i+1 sample points.
std::vector<Rat> pf_coeffs(const std::vector<Rat>& t);

// |f_i(N) - f_i(N+n) - i*n/N^{i+1}| <= 2^{10i} n^2 / N^{i+2},
// valid under |n| <= N/4i (throws HypothesisViolated otherwise).
bool infdest_check(const ShiftSystem& sys, long i, const Int& N, const Int& n);

struct VandermondeData {
  long d = 1;
  Mat V;             // (j^{-i-1})
  Mat Vinv;
  std::vector<Int> Ddiag;  // j^{d+1}
  Int v_d;           // |det(VD)| = prod_{i<j} (j-i)
  Mat adj;           // v_d (VD)^{-1}, integer entries
  Rat eps;           // 1 / max row sum of |Vinv|
};

VandermondeData vandermonde_data(long d);

// Given the displacement w = s - x (|w_i| <= eps * M / N^{i+1}), returns
// integers n_1..n_d with |n_j| <= M and
//   | i/N^{i+1} * sum_j n_j/j^{i+1}  -  w_i |  <=  i v_d / N^{i+1}
// for every i; each of those facts is re-verified exactly on the result.
std::vector<Int> lattice_approx(const VandermondeData& vd, const Int& N,
                                const Int& M, const std::vector<Rat>& w);

struct CoverReport {
  long total = 0;
  long covered = 0;
  bool all() const { return covered == total; }
  std::optional<std::vector<Rat>> first_failure;
};

// Grid verification of the box covering: every target in
// s + eps*prod[-M/N^{i+1}, M/N^{i+1}] gets a member of S within the
// D_d * (1/N^{i+1} + M^2/N^{i+2}) box, all in exact arithmetic.
CoverReport quantest_cover_check(const ShiftSystem& sys,
                                 const VandermondeData& vd, const Int& N,
                                 const Int& M, long grid_density);

struct StageParams {
  long d = 1;
  Rat beta;
  Rat alpha;
  long k0 = 1;
  VandermondeData vd;
  Int Dd;  // max{d v_d, 2^{10d+1}}
  std::function<Int(long)> N;  // (2d+1)^k up to k0, then floor(2^alpha^k)
  std::function<Int(long)> M;  // min{floor(N/4d), isqrt(N)}
  long depth_cap = 140;
};

StageParams default_params(long d);

struct StageCondition {
  bool holds;
  Rat ratio;  // LHS / RHS of the governing inequality
};
// D_d/N_k^{i+1} + D_d M_k^2/N_k^{i+2} <= eps_d M_{k+1}/N_{k+1}^{i+1}
StageCondition stage_condition(const StageParams& p, long k, long i);

// Least m with the stage condition certified on [m, m+window] for every
// i <= d, the window ending with strictly decreasing ratios (the
// closed-form branch makes the ratio eventually monotone to 0).
long first_stage(const StageParams& p, long cap, long window = 16);

struct StageState {
  long k = 0;               // next stage index (one past the last completed)
  long start = 0;           // first stage index m
  std::vector<Int> emitted; // a_n blocks, d per stage
  std::vector<Rat> targets;
  std::vector<Enclosure> residual;    // x_i - partial_i - tail, per coordinate
  std::vector<Rat> box;               // current radii delta_i = eps M_k/N_k^{i+1}
  std::vector<std::vector<Rat>> stage_widths;  // per stage, per coordinate
};

// Dyadic targets strictly inside the solvable box at stage m.
std::vector<Rat> default_targets(const StageParams& p, long m,
                                 const TailLimits& lim = {});

StageState build_simultaneous(const StageParams& p,
                              const std::vector<Rat>& targets, long stages,
                              const TailLimits& lim = {});

}  // namespace ahmes
