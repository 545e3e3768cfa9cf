#include "ahmes/series.hpp"

namespace ahmes {

static Enclosure exact_tail_enclosure(const TermSpec& spec, long from) {
  // Telescoping consistency at the indices we touch certifies the closed
  // form locally; remainder positivity pins it from below.
  Rat tail = spec.exact_tail(from);
  for (long n = from; n < from + 4; ++n) {
    Rat next = spec.exact_tail(n + 1);
    if (tail != spec.at(n) + next)
      throw Error("CertificateViolated",
                  spec.name + ": exact_tail telescoping fails at n=" +
                      std::to_string(n));
    if (next < 0)
      throw Error("CertificateViolated", spec.name + ": negative tail");
    tail = next;
  }
  return Enclosure(spec.exact_tail(from));
}

Enclosure tail_enclosure(const TermSpec& spec, long from, const Rat& width_goal,
                         const TailLimits& lim) {
  if (width_goal < 0) throw Error("BadArgument", "width_goal < 0");
  if (spec.exact_tail) return exact_tail_enclosure(spec, from);
  if (!spec.decay)
    throw Error("CertificateMissing",
                spec.name + ": no decay certificate and no exact tail");
  const DecayCertificate& cert = *spec.decay;
  if (cert.ratio <= 0 || cert.ratio >= 1)
    throw Error("CertificateViolated", spec.name + ": ratio not in (0,1)");

  Rat partial = 0;
  Rat prev = spec.at(from);
  Rat geom = cert.ratio / (1 - cert.ratio);
  for (long k = 0; k < lim.max_terms; ++k) {
    long n = from + k;
    Rat cur = (k == 0) ? prev : spec.at(n);
    if (k > 0 && n - 1 >= cert.valid_from && cur > cert.ratio * prev)
      throw Error("CertificateViolated",
                  spec.name + ": ratio bound fails at n=" + std::to_string(n - 1));
    partial += cur;
    prev = cur;
    if (n >= cert.valid_from) {
      Rat remainder = cur * geom;
      if (remainder <= width_goal) return Enclosure(partial, partial + remainder);
    }
  }
  throw Error("NoConvergence",
              spec.name + ": width goal unreachable within " +
                  std::to_string(lim.max_terms) + " terms");
}

Rat pick_dyadic(const Rat& lo, const Rat& hi) {
  if (lo >= hi) throw Error("BadArgument", "pick_dyadic needs lo < hi");
  Rat half(1, 2);
  Rat step = 1;
  for (int j = 0; j < 100000; ++j) {
    // smallest grid 2^-j containing an interior point
    Int k = floor_rat(hi / step);
    Rat cand = Rat(k) * step;
    if (cand >= hi) cand -= step;
    if (cand > lo && cand < hi) return cand;
    step *= half;
  }
  throw Error("NoConvergence", "pick_dyadic cap exhausted");
}

}  // namespace ahmes
