#include "ahmes/multidim.hpp"

#include <map>
#include <memory>

namespace ahmes {
namespace {

Int ipow(long base, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

Rat rpow(const Rat& x, long e) { return pow_rat(x, e); }

}  // namespace

Mat mat_mul(const Mat& A, const Mat& B) {
  size_t n = A.size(), m = B[0].size(), k = B.size();
  Mat C(n, std::vector<Rat>(m, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
  return C;
}

Mat mat_inverse(const Mat& A) {
  size_t n = A.size();
  Mat W = A;
  Mat I(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && W[piv][col] == 0) ++piv;
    if (piv == n) throw Error("SingularMatrix", "no pivot in column");
    std::swap(W[piv], W[col]);
    std::swap(I[piv], I[col]);
    Rat p = W[col][col];
    for (size_t j = 0; j < n; ++j) {
      W[col][j] /= p;
      I[col][j] /= p;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || W[r][col] == 0) continue;
      Rat f = W[r][col];
      for (size_t j = 0; j < n; ++j) {
        W[r][j] -= f * W[col][j];
        I[r][j] -= f * I[col][j];
      }
    }
  }
  return I;
}

ShiftSystem integer_shifts() {
  return {"integers-from-zero", [](long i) -> Rat { return Rat(i - 1); }};
}

Rat f_eval(const ShiftSystem& sys, long i, const Rat& x) {
  Rat prod = 1;
  for (long j = 1; j <= i; ++j) {
    Rat factor = x + sys.t(j);
    if (factor == 0) return Rat(0);  // pole convention
    prod *= factor;
  }
  return 1 / prod;
}

std::vector<Rat> pf_coeffs(const std::vector<Rat>& t) {
  size_t i = t.size();
  if (i == 0) throw Error("BadArgument", "need at least one shift");
  for (size_t a = 0; a < i; ++a)
    for (size_t b = a + 1; b < i; ++b)
      if (t[a] == t[b]) throw Error("DuplicateShift", "shifts must differ");
  std::vector<Rat> m(i);
  for (size_t j = 0; j < i; ++j) {
    Rat prod = 1;
    for (size_t k = 0; k < i; ++k)
      if (k != j) prod *= t[k] - t[j];
    m[j] = 1 / prod;
  }
  // independent check: both sides of the decomposition at i+1 points
  Rat x = 0;
  for (const Rat& tj : t)
    if (abs(tj) > x) x = abs(tj);
  x += 1;
  for (size_t s = 0; s <= i; ++s, x += 1) {
    Rat lhs = 1, rhs = 0;
    for (size_t j = 0; j < i; ++j) {
      lhs *= x + t[j];
      rhs += m[j] / (x + t[j]);
    }
    if (1 / lhs != rhs)
      throw Error("CertificateViolated", "partial fractions cross-check");
  }
  return m;
}

bool infdest_check(const ShiftSystem& sys, long i, const Int& N,
                   const Int& n) {
  if (i < 1 || N < 1) throw Error("BadArgument", "need i >= 1, N >= 1");
  if (4 * i * abs(n) > N)
    throw Error("HypothesisViolated", "|n| > N/4i");
  Rat lhs = f_eval(sys, i, Rat(N)) - f_eval(sys, i, Rat(N + n)) -
            i * Rat(n) / rpow(Rat(N), i + 1);
  Rat rhs = Rat(Int(1) << (10 * i)) * Rat(n) * Rat(n) / rpow(Rat(N), i + 2);
  return abs(lhs) <= rhs;
}

VandermondeData vandermonde_data(long d) {
  if (d < 1) throw Error("BadArgument", "d >= 1");
  VandermondeData vd;
  vd.d = d;
  vd.V.assign(d, std::vector<Rat>(d));
  for (long i = 1; i <= d; ++i)
    for (long j = 1; j <= d; ++j) vd.V[i - 1][j - 1] = Rat(1) / Rat(ipow(j, i + 1));
  vd.Ddiag.resize(d);
  for (long j = 1; j <= d; ++j) vd.Ddiag[j - 1] = ipow(j, d + 1);
  vd.v_d = 1;
  for (long i = 1; i <= d; ++i)
    for (long j = i + 1; j <= d; ++j) vd.v_d *= j - i;
  Mat VD(d, std::vector<Rat>(d));
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) VD[i][j] = vd.V[i][j] * Rat(vd.Ddiag[j]);
  Mat VDinv = mat_inverse(VD);
  vd.adj.assign(d, std::vector<Rat>(d));
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      vd.adj[i][j] = Rat(vd.v_d) * VDinv[i][j];
      if (vd.adj[i][j].get_den() != 1)
        throw Error("CertificateViolated", "adjugate entry not an integer");
    }
  vd.Vinv = mat_inverse(vd.V);
  Mat check = mat_mul(vd.V, vd.Vinv);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      if (check[i][j] != Rat(i == j ? 1 : 0))
        throw Error("CertificateViolated", "V * Vinv != I");
  Rat worst = 0;
  for (long i = 0; i < d; ++i) {
    Rat row = 0;
    for (long j = 0; j < d; ++j) row += abs(vd.Vinv[i][j]);
    if (row > worst) worst = row;
  }
  vd.eps = 1 / worst;
  return vd;
}

std::vector<Int> lattice_approx(const VandermondeData& vd, const Int& N,
                                const Int& M, const std::vector<Rat>& w) {
  long d = vd.d;
  if (long(w.size()) != d) throw Error("BadArgument", "offset dimension");
  std::vector<Rat> z(d);
  std::vector<Int> u(d), n(d);
  for (long i = 1; i <= d; ++i) {
    Rat Ni1 = rpow(Rat(N), i + 1);
    if (abs(w[i - 1]) > vd.eps * Rat(M) / Ni1)
      throw Error("OffsetOutsideBox",
                  "offset coordinate " + std::to_string(i) + " too large");
    z[i - 1] = w[i - 1] * Ni1 / i;
    u[i - 1] = trunc_to_multiple(z[i - 1], vd.v_d);
  }
  // n = Vinv u = Ddiag * adj * (u / v_d), integer by construction
  for (long r = 0; r < d; ++r) {
    Int acc = 0;
    for (long c = 0; c < d; ++c) {
      Rat term = vd.adj[r][c] * Rat(u[c] / vd.v_d);
      acc += term.get_num();  // adj and u/v_d are integers
    }
    n[r] = vd.Ddiag[r] * acc;
  }
  // the facts the caller relies on, re-proved on the concrete output
  for (long r = 0; r < d; ++r)
    if (abs(n[r]) > M)
      throw Error("CertificateViolated", "lattice point outside [-M, M]");
  for (long i = 0; i < d; ++i) {
    Rat Vn = 0;
    for (long j = 0; j < d; ++j) Vn += vd.V[i][j] * Rat(n[j]);
    if (Vn != Rat(u[i]))
      throw Error("CertificateViolated", "V n != chosen lattice point");
    if (!(abs(Rat(u[i]) - z[i]) < Rat(vd.v_d)))
      throw Error("CertificateViolated", "rounding drifted by >= v_d");
  }
  return n;
}

CoverReport quantest_cover_check(const ShiftSystem& sys,
                                 const VandermondeData& vd, const Int& N,
                                 const Int& M, long grid_density) {
  long d = vd.d;
  if (M < 0 || 4 * d * M > N)
    throw Error("HypothesisViolated", "need 0 <= M <= N/4d");
  if (grid_density < 2) throw Error("BadArgument", "grid_density >= 2");
  Int Dd = d * vd.v_d;
  if (Int two_c = Int(1) << (10 * d + 1); two_c > Dd) Dd = two_c;

  std::vector<Rat> s(d);
  for (long i = 1; i <= d; ++i) {
    s[i - 1] = 0;
    for (long j = 1; j <= d; ++j) s[i - 1] += f_eval(sys, i, Rat(j) * Rat(N));
  }

  CoverReport rep;
  std::vector<long> g(d, 0);
  while (true) {
    std::vector<Rat> x(d), w(d);
    for (long i = 1; i <= d; ++i) {
      Rat frac = Rat(2 * g[i - 1], grid_density - 1) - 1;  // in [-1, 1]
      Rat off = vd.eps * frac * Rat(M) / rpow(Rat(N), i + 1);
      x[i - 1] = s[i - 1] + off;
      w[i - 1] = -off;  // s - x
    }
    ++rep.total;
    std::vector<Int> n = lattice_approx(vd, N, M, w);
    bool ok = true;
    for (long i = 1; i <= d; ++i) {
      Rat y = 0;
      for (long j = 1; j <= d; ++j)
        y += f_eval(sys, i, Rat(j) * Rat(N) + Rat(n[j - 1]));
      Rat tol = Rat(Dd) * (1 / rpow(Rat(N), i + 1) +
                           Rat(M) * Rat(M) / rpow(Rat(N), i + 2));
      if (abs(x[i - 1] - y) > tol) ok = false;
    }
    if (ok) ++rep.covered;
    else if (!rep.first_failure) rep.first_failure = x;
    long c = 0;
    while (c < d && ++g[c] == grid_density) g[c++] = 0;
    if (c == d) break;
  }
  return rep;
}

StageParams default_params(long d) {
  if (d < 1) throw Error("BadArgument", "d >= 1");
  StageParams p;
  p.d = d;
  Rat cap = Rat(2 * d + 2, 2 * d + 1);
  // largest beta = 1 + 2^-j with beta^d below the admissible cap
  Rat beta(3, 2);
  while (!(rpow(beta, d) < cap)) beta = 1 + (beta - 1) / 2;
  p.beta = beta;
  p.alpha = (rpow(beta, d) + cap) / 2;
  p.vd = vandermonde_data(d);
  p.Dd = d * p.vd.v_d;
  if (Int two_c = Int(1) << (10 * d + 1); two_c > p.Dd) p.Dd = two_c;

  // k0: past it the exponent increments alpha^k (alpha-1) exceed
  // log2(2d+1) + 2, which keeps floor(2^alpha^(k+1)) >= (2d+1) floor(2^alpha^k)
  // for every later k; the crossover index itself is checked directly.
  long k0 = -1;
  for (long K = 1; K <= 120 && k0 < 0; ++K) {
    if (!(floor_pow2(rpow(p.alpha, K + 1)) >= ipow(2 * d + 1, K + 1))) continue;
    bool ok = rpow(p.alpha, K) * (p.alpha - 1) >= Rat(bit_length(Int(2 * d + 1)) + 2);
    for (long k = K + 1; ok && k <= K + 8; ++k)
      ok = floor_pow2(rpow(p.alpha, k + 1)) >=
           (2 * d + 1) * floor_pow2(rpow(p.alpha, k));
    if (ok) k0 = K;
  }
  if (k0 < 0) throw Error("NoConvergence", "k0 search failed");
  p.k0 = k0;

  long d2 = d, k0c = k0;
  Rat alpha = p.alpha;
  long cap_k = p.depth_cap;
  auto memo = std::make_shared<std::map<long, Int>>();
  p.N = [d2, k0c, alpha, cap_k, memo](long k) -> Int {
    if (k < 1) throw Error("BadArgument", "k >= 1");
    if (k > cap_k) throw Error("DepthTooLarge", "stage index past the cap");
    auto it = memo->find(k);
    if (it != memo->end()) return it->second;
    Int v = k <= k0c ? ipow(2 * d2 + 1, k) : floor_pow2(rpow(alpha, k));
    return memo->emplace(k, v).first->second;
  };
  auto Nf = p.N;
  p.M = [d2, Nf](long k) -> Int {
    Int n = Nf(k);
    Int a = n / (4 * d2), b = isqrt(n);
    return a < b ? a : b;
  };
  return p;
}

StageCondition stage_condition(const StageParams& p, long k, long i) {
  if (i < 1 || i > p.d) throw Error("BadArgument", "need 1 <= i <= d");
  Rat Nk(p.N(k)), Mk(p.M(k));
  Rat lhs = Rat(p.Dd) / rpow(Nk, i + 1) + Rat(p.Dd) * Mk * Mk / rpow(Nk, i + 2);
  Rat rhs = p.vd.eps * Rat(p.M(k + 1)) / rpow(Rat(p.N(k + 1)), i + 1);
  return {lhs <= rhs, lhs / rhs};
}

long first_stage(const StageParams& p, long cap, long window) {
  long m = -1;
  for (long k = p.k0 + 1; k + window < cap; ++k) {
    bool all = true;
    for (long kk = k; all && kk <= k + window; ++kk)
      for (long i = 1; all && i <= p.d; ++i) all = stage_condition(p, kk, i).holds;
    if (!all) continue;
    // the governing ratio must already be falling at the window's end
    bool mono = true;
    for (long i = 1; mono && i <= p.d; ++i)
      for (long kk = k + window - 3; mono && kk < k + window; ++kk)
        mono = stage_condition(p, kk + 1, i).ratio < stage_condition(p, kk, i).ratio;
    if (mono) { m = k; break; }
  }
  if (m < 0) throw Error("NoStage", "stage condition never stabilizes");
  return m;
}

namespace {

// sum over j <= d of f_i(j N_l), one term of the stage tail series
TermSpec stage_term_spec(const StageParams& p, long i) {
  ShiftSystem sys = integer_shifts();
  long d = p.d;
  auto Nf = p.N;
  return {"stage-tail(i=" + std::to_string(i) + ")",
          [sys, d, Nf, i](long l) -> Rat {
            Rat sum = 0;
            for (long j = 1; j <= d; ++j)
              sum += f_eval(sys, i, Rat(j) * Rat(Nf(l)));
            return sum;
          },
          // N_{l+1} >= (2d+1) N_l makes each f_i factor grow by at least
          // 2d+1, hence the whole term shrinks by at least that much
          DecayCertificate{Rat(1, 2 * d + 1), 1},
          {}};
}

Rat box_radius(const StageParams& p, long k, long i) {
  return p.vd.eps * Rat(p.M(k)) / pow_rat(Rat(p.N(k)), i + 1);
}

}  // namespace

std::vector<Rat> default_targets(const StageParams& p, long m,
                                 const TailLimits& lim) {
  std::vector<Rat> targets(p.d);
  for (long i = 1; i <= p.d; ++i) {
    Rat delta = box_radius(p, m, i);
    Enclosure T = tail_enclosure(stage_term_spec(p, i), m, delta / (Int(1) << 20), lim);
    targets[i - 1] = pick_dyadic(T.hi - delta / 2, T.lo + delta / 2);
  }
  return targets;
}

StageState build_simultaneous(const StageParams& p,
                              const std::vector<Rat>& targets_in, long stages,
                              const TailLimits& lim) {
  if (stages < 1) throw Error("BadArgument", "stages >= 1");
  long d = p.d;
  long m = first_stage(p, p.depth_cap, 16);
  std::vector<Rat> targets = targets_in.empty() ? default_targets(p, m, lim) : targets_in;
  if (long(targets.size()) != d) throw Error("BadArgument", "need d targets");

  ShiftSystem sys = integer_shifts();
  std::vector<TermSpec> specs;
  for (long i = 1; i <= d; ++i) specs.push_back(stage_term_spec(p, i));

  StageState st;
  st.start = m;
  st.targets = targets;
  std::vector<Rat> partial(d, Rat(0));

  // membership at the starting stage
  st.residual.resize(d);
  st.box.resize(d);
  for (long i = 1; i <= d; ++i) {
    Rat delta = box_radius(p, m, i);
    Enclosure T = tail_enclosure(specs[i - 1], m, delta / (Int(1) << 20), lim);
    Enclosure E = Rat(targets[i - 1]) - T;
    if (!(E.lo >= -delta && E.hi <= delta))
      throw Error("TargetOutsideBox",
                  "coordinate " + std::to_string(i) + " not in the stage-" +
                      std::to_string(m) + " box");
    st.residual[i - 1] = E;
    st.box[i - 1] = delta;
  }

  for (long k = m; k < m + stages; ++k) {
    for (long i = 1; i <= d; ++i)
      if (!stage_condition(p, k, i).holds)
        throw Error("StageConditionUnmet", "stage " + std::to_string(k));
    Int Nk = p.N(k), Mk = p.M(k);
    std::vector<Rat> w(d);
    std::vector<Enclosure> nextT(d);
    for (long i = 1; i <= d; ++i) {
      Rat delta = box_radius(p, k, i);
      Rat goalw = box_radius(p, k + 1, i) / (Int(1) << 30);
      nextT[i - 1] = tail_enclosure(specs[i - 1], k + 1, goalw, lim);
      Rat sk = specs[i - 1].at(k);
      Enclosure W = nextT[i - 1] + sk + partial[i - 1] - targets[i - 1];
      Rat mid = W.mid();
      if (mid > delta) mid = delta;
      if (mid < -delta) mid = -delta;
      w[i - 1] = mid;
    }
    std::vector<Int> n = lattice_approx(p.vd, Nk, Mk, w);
    for (long j = 1; j <= d; ++j) {
      Int a = j * Nk + n[j - 1];
      if (!st.emitted.empty() && a <= st.emitted.back())
        throw Error("InvariantBreach", "emitted terms not increasing");
      st.emitted.push_back(a);
    }
    std::vector<Rat> widths(d);
    for (long i = 1; i <= d; ++i) {
      for (long j = 1; j <= d; ++j)
        partial[i - 1] += f_eval(sys, i, Rat(j) * Rat(Nk) + Rat(n[j - 1]));
      Rat deltan = box_radius(p, k + 1, i);
      Enclosure E = Rat(targets[i - 1]) - partial[i - 1] - nextT[i - 1];
      if (!(E.lo >= -deltan && E.hi <= deltan))
        throw Error("InvariantBreach",
                    "membership lost at stage " + std::to_string(k));
      st.residual[i - 1] = E;
      st.box[i - 1] = deltan;
      widths[i - 1] = deltan;
    }
    st.stage_widths.push_back(widths);
  }
  st.k = m + stages;
  return st;
}

}  // namespace ahmes
