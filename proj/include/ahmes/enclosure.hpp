#pragma once

#include <string>

#include "ahmes/rational.hpp"

namespace ahmes {

// Certified closed interval [lo, hi] containing an exact (possibly
// irrational) quantity.  All infinite sums in this project live here.
struct Enclosure {
  Rat lo;
  Rat hi;

  Enclosure() = default;
  Enclosure(Rat point) : lo(point), hi(std::move(point)) {}
  Enclosure(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw Error("BadEnclosure", "lo > hi");
  }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool is_point() const { return lo == hi; }

  bool contains(const Rat& q) const { return lo <= q && q <= hi; }
  bool contains(const Enclosure& e) const { return lo <= e.lo && e.hi <= hi; }

  Enclosure operator+(const Enclosure& o) const {
    return {lo + o.lo, hi + o.hi};
  }
  Enclosure operator+(const Rat& q) const { return {lo + q, hi + q}; }
  Enclosure operator-(const Enclosure& o) const {
    return {lo - o.hi, hi - o.lo};
  }
  Enclosure operator-(const Rat& q) const { return {lo - q, hi - q}; }
  friend Enclosure operator-(const Rat& q, const Enclosure& e) {
    return {q - e.hi, q - e.lo};
  }
  Enclosure operator*(const Rat& q) const {
    if (q >= 0) return {lo * q, hi * q};
    return {hi * q, lo * q};
  }
};

enum class Ordering { Below, Above, Straddles };

inline Ordering enclosure_compare(const Enclosure& e, const Rat& q) {
  if (e.hi < q) return Ordering::Below;
  if (e.lo > q) return Ordering::Above;
  return Ordering::Straddles;
}

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Below: return "Below";
    case Ordering::Above: return "Above";
    default: return "Straddles";
  }
}

inline std::string decimal_render(const Enclosure& e, int digits) {
  return "[" + decimal_render(e.lo, digits, Round::Down) + ", " +
         decimal_render(e.hi, digits, Round::Up) + "]";
}

}  // namespace ahmes
