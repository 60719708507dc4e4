#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace coptrack {

/// Closed real interval [lo, hi]. Disturbance sets and 1-D constraint sets.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw std::invalid_argument("Interval: requires finite lo <= hi");
    }
  }

  static Interval point(double v) { return Interval(v, v); }
  static Interval symmetric(double half_span) { return Interval(-half_span, half_span); }

  double span() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

inline Interval minkowski_sum(const Interval& a, const Interval& b) {
  return Interval(a.lo + b.lo, a.hi + b.hi);
}

/// A erode B = {x | x + B subset of A}; empty result is a value, not an error.
inline std::optional<Interval> pontryagin_diff(const Interval& a, const Interval& b) {
  const double lo = a.lo - b.lo;
  const double hi = a.hi - b.hi;
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

}  // namespace coptrack
