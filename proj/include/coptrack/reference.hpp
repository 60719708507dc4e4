#pragma once

#include <string>
#include <vector>

#include "coptrack/system.hpp"

namespace coptrack {

struct Footstep {
  double cop;       // m
  double duration;  // s, > 0 and an integer multiple of the base tick
};

struct FootstepPlan {
  std::string axis = "lateral";
  std::vector<Footstep> steps;

  /// Stationary stance at `cop` held for `duration`.
  static FootstepPlan stance(double cop, double duration);
  /// Alternating +/-amplitude steps, bracketed by stances at zero.
  static FootstepPlan alternating(double amplitude, double step_duration, int count,
                                  double lead_in, double lead_out);

  double total_duration() const;
};

/// Per-tick reference arrays. States are stored at ticks 0..n; p holds the
/// CoP active over [t, t+1) with the final entry repeated.
struct ReferenceTrajectory {
  double tick = 0.0;
  std::vector<double> c, cdot, xi, p;

  std::size_t ticks() const { return p.empty() ? 0 : p.size() - 1; }
  double duration() const { return static_cast<double>(ticks()) * tick; }
};

/// Builds the reference by the divergent-component backward recursion
///   xi[t] = p[t] + e^{-omega tick} (xi[t+1] - p[t]),  xi[end] = last CoP,
/// then integrates states forward with the exact tick-level discretization,
/// so x_ref[t+1] = A x_ref[t] + B p_ref[t] holds by construction.
/// Requires a nonempty plan whose final step lasts at least 3/omega.
ReferenceTrajectory generate_reference(const FootstepPlan& plan, double omega, double base_tick);

}  // namespace coptrack
