#include "coptrack/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace coptrack {

FootstepPlan FootstepPlan::stance(double cop, double duration) {
  FootstepPlan plan;
  plan.steps.push_back({cop, duration});
  return plan;
}

FootstepPlan FootstepPlan::alternating(double amplitude, double step_duration, int count,
                                       double lead_in, double lead_out) {
  FootstepPlan plan;
  plan.steps.push_back({0.0, lead_in});
  for (int i = 0; i < count; ++i) {
    plan.steps.push_back({(i % 2 == 0) ? amplitude : -amplitude, step_duration});
  }
  plan.steps.push_back({0.0, lead_out});
  return plan;
}

double FootstepPlan::total_duration() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.duration;
  return total;
}

namespace {

std::size_t duration_ticks(double duration, double tick) {
  const double ratio = duration / tick;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        "generate_reference: step durations must be positive integer multiples of the base tick");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

ReferenceTrajectory generate_reference(const FootstepPlan& plan, double omega, double base_tick) {
  if (plan.steps.empty()) {
    throw std::invalid_argument("generate_reference: empty footstep plan");
  }
  if (!(omega > 0.0) || !(base_tick > 0.0)) {
    throw std::invalid_argument("generate_reference: omega and base_tick must be > 0");
  }
  if (plan.steps.back().duration < 3.0 / omega) {
    throw std::invalid_argument(
        "generate_reference: final step too short for the capture point to settle (< 3/omega)");
  }

  ReferenceTrajectory ref;
  ref.tick = base_tick;

  // Piecewise-constant CoP reference at tick resolution.
  for (const auto& s : plan.steps) {
    if (!(s.duration > 0.0)) {
      throw std::invalid_argument("generate_reference: step durations must be > 0");
    }
    const std::size_t n = duration_ticks(s.duration, base_tick);
    ref.p.insert(ref.p.end(), n, s.cop);
  }
  const std::size_t n_ticks = ref.p.size();
  ref.p.push_back(ref.p.back());  // state index n gets the final CoP

  // Backward recursion for the divergent component, settling on the last CoP.
  ref.xi.assign(n_ticks + 1, 0.0);
  ref.xi[n_ticks] = plan.steps.back().cop;
  const double decay = std::exp(-omega * base_tick);
  for (std::size_t t = n_ticks; t-- > 0;) {
    ref.xi[t] = ref.p[t] + decay * (ref.xi[t + 1] - ref.p[t]);
  }

  // Forward state integration; starting at rest on the initial CP makes the
  // stationary-stance reference exactly constant.
  const StateMatrices m = discretize(SystemParams(omega, base_tick));
  ref.c.assign(n_ticks + 1, 0.0);
  ref.cdot.assign(n_ticks + 1, 0.0);
  ref.c[0] = ref.xi[0];
  ref.cdot[0] = omega * (ref.xi[0] - ref.c[0]);
  StateVec x(ref.c[0], ref.cdot[0]);
  for (std::size_t t = 0; t < n_ticks; ++t) {
    x = step(m, x, ref.p[t], 0.0);
    ref.c[t + 1] = x(0);
    ref.cdot[t + 1] = x(1);
  }
  return ref;
}

}  // namespace coptrack
