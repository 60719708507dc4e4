#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coptrack/design.hpp"
#include "coptrack/reference.hpp"
#include "coptrack/stability.hpp"
#include "coptrack/system.hpp"

namespace coptrack {

/// Bounded disturbance injected into the feedback loop as v = k xi_hat + n_hat.
/// Realized samples always lie in [-span/2, +span/2] per component.
struct DisturbanceModel {
  enum class Kind { worst_case_sign, uniform_random, constant, sinusoidal };

  Kind kind = Kind::uniform_random;
  double xi_hat_span = 0.0;  // m
  double n_hat_span = 0.0;   // m
  std::uint64_t seed = 0;    // uniform_random
  double frequency_hz = 1.0; // sinusoidal

  static DisturbanceModel worst_case(const UncertaintyBudget& b);
  static DisturbanceModel uniform(const UncertaintyBudget& b, std::uint64_t seed);
};

struct TraceSummary {
  double max_abs_p_err = 0.0;   // max |p - p_ref| at control instants
  double max_abs_xi_err = 0.0;  // max |xi - xi_ref| over all ticks
  double p_err_min = 0.0;
  double p_err_max = 0.0;
  double p_err_span = 0.0;
  bool diverged = false;
};

/// Time-indexed closed-loop record. All per-tick arrays share one length;
/// inputs (p, v, xi_hat, n_hat) hold the value applied from that tick on.
struct SimulationTrace {
  double tick = 0.0;
  std::size_t control_stride = 1;
  std::vector<double> time, c, cdot, xi, p;
  std::vector<double> c_ref, cdot_ref, xi_ref, p_ref;
  std::vector<double> v, xi_hat, n_hat;
  std::vector<std::size_t> control_ticks;   // tick index of each control instant
  std::vector<double> p_err_at_control;     // p_cmd - p_ref there
  TraceSummary summary;
};

/// Two-clock closed-loop rollout: the plant advances every reference tick
/// while the capture-point feedback runs every params.tau (an integer
/// multiple of the tick) and the commanded CoP is held in between. The
/// control law is p = p_ref + K (x - x_ref) + v with v = k xi_hat + n_hat,
/// which on the capture-point line reads p = p_ref + k (xi + xi_hat -
/// xi_ref) + n_hat. The plant's own nonlinearity input stays at zero so
/// n_hat is exactly the net model error.
SimulationTrace rollout(const SystemParams& params, const Gains& gains,
                        const ReferenceTrajectory& ref, const DisturbanceModel& disturbance,
                        const StateVec& initial_error);

/// Analytic vs measured spans over a sampling-period list; rollouts use a
/// stationary stance so the series bound applies exactly.
struct SweepMeasurement {
  double tau = 0.0;
  std::optional<double> analytic_span;  // r (k xi_span + n_span); nullopt = unstable
  double worst_case_span = 0.0;
  double random_span_max = 0.0;
  bool diverged = false;
};

std::vector<SweepMeasurement> sweep_and_measure(double omega, const Gains& gains,
                                                const UncertaintyBudget& budget,
                                                const std::vector<double>& tau_list, int trials,
                                                double horizon_s, double base_tick,
                                                std::uint64_t seed);

}  // namespace coptrack
