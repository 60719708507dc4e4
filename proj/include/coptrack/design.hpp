#pragma once

#include <optional>
#include <vector>

#include "coptrack/system.hpp"

namespace coptrack {

/// Worst-case spans of the capture-point estimation error and of the net
/// model error, in meters. Together they induce a CoP disturbance of span
/// k * xi_hat_span + n_hat_span.
struct UncertaintyBudget {
  double xi_hat_span;
  double n_hat_span;

  UncertaintyBudget(double xi_hat_span_, double n_hat_span_);
};

/// One row of a sampling-period sweep.
struct DesignPoint {
  double k = 0.0;
  double tau = 0.0;                  // s
  std::optional<double> r;           // amplification ratio; nullopt = unstable
  std::optional<double> p_span;      // predicted CoP error span, m
  bool feasible = false;
};

/// Predicted CoP tracking-error span r k xi_hat_span + r n_hat_span for
/// capture-point gains k [1, 1/omega]; nullopt where the ratio is undefined.
std::optional<double> combined_span(const UncertaintyBudget& budget, const SystemParams& params,
                                    double k);

struct OptimalGain {
  double k_star;
  double p_span_star;  // m
};

/// Closed-form minimizer of the plateau-regime span:
///   k*      = 1 + sqrt((xi + n) / (2 xi)),
///   p_span* = (sqrt(xi) + sqrt(2 (xi + n)))^2.
/// Throws std::domain_error when xi_hat_span = 0 (k* would escape to
/// infinity, outside the stability triangle for any fixed tau).
OptimalGain optimal_gain(const UncertaintyBudget& budget);

/// Longest sampling period with no impact on the tracking-error span:
/// omega * tau0 = ln(1/(k-1) + 1). Throws for k <= 1.
double tau_threshold_scaled(double k);
double tau_threshold(double k, double omega);  // seconds

/// One DesignPoint per grid entry; grid must be strictly increasing, > 0.
std::vector<DesignPoint> sweep_tau(const UncertaintyBudget& budget, double omega, double k,
                                   const std::vector<double>& tau_grid);

}  // namespace coptrack
