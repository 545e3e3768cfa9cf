#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ahmes/enclosure.hpp"

namespace ahmes {

// Declared geometric domination: term(n+1) <= ratio * term(n) for every
// n >= valid_from.  Checked at every index the engine touches; a violation
// is a hard error, never a silent fallback.
struct DecayCertificate {
  Rat ratio;            // in (0,1)
  long valid_from = 1;
};

// A positive series given by its term function plus whatever certificates
// the constructor can honestly supply.  `exact_tail`, when present, is the
// closed form of sum_{k>=n} term(k); it is validated per index through the
// telescoping identity exact_tail(n) == term(n) + exact_tail(n+1).
struct TermSpec {
  std::string name;
  std::function<Rat(long)> term;
  std::optional<DecayCertificate> decay;
  std::function<Rat(long)> exact_tail;  // may be empty

  Rat at(long n) const {
    Rat v = term(n);
    if (v < 0) throw Error("NegativeTerm", name + " term(" + std::to_string(n) + ") < 0");
    return v;
  }
};

struct TailLimits {
  long max_terms = 4096;
};

// Certified enclosure of sum_{n>=from} term(n) with width <= width_goal.
// Lower bound is a bare partial sum; upper bound adds the geometric
// remainder term(K)*ratio/(1-ratio) for the last summed index K.  With an
// exact_tail the result is the (validated) point enclosure.
Enclosure tail_enclosure(const TermSpec& spec, long from, const Rat& width_goal,
                         const TailLimits& lim = {});

// Some dyadic rational strictly inside the open interval (lo, hi);
// deterministic, smallest power-of-two denominator that fits.
Rat pick_dyadic(const Rat& lo, const Rat& hi);

}  // namespace ahmes
