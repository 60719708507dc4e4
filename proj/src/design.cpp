#include "coptrack/design.hpp"

#include <cmath>
#include <stdexcept>

#include "coptrack/stability.hpp"
#include "coptrack/tube.hpp"

namespace coptrack {

UncertaintyBudget::UncertaintyBudget(double xi_hat_span_, double n_hat_span_)
    : xi_hat_span(xi_hat_span_), n_hat_span(n_hat_span_) {
  if (!std::isfinite(xi_hat_span) || xi_hat_span < 0.0 || !std::isfinite(n_hat_span) ||
      n_hat_span < 0.0) {
    throw std::invalid_argument("UncertaintyBudget: spans must be finite and >= 0");
  }
}

std::optional<double> combined_span(const UncertaintyBudget& budget, const SystemParams& params,
                                    double k) {
  const auto r = ratio_closed_form(params, Gains::cp_line(k, params.omega));
  if (!r.has_value()) return std::nullopt;
  return *r * k * budget.xi_hat_span + *r * budget.n_hat_span;
}

OptimalGain optimal_gain(const UncertaintyBudget& budget) {
  if (budget.xi_hat_span <= 0.0) {
    throw std::domain_error("optimal_gain: xi_hat_span must be > 0");
  }
  const double xi = budget.xi_hat_span;
  const double n = budget.n_hat_span;
  OptimalGain g;
  g.k_star = 1.0 + std::sqrt((xi + n) / (2.0 * xi));
  const double root = std::sqrt(xi) + std::sqrt(2.0 * (xi + n));
  g.p_span_star = root * root;
  return g;
}

double tau_threshold_scaled(double k) {
  if (k <= 1.0) throw std::domain_error("tau_threshold: requires k > 1");
  return std::log(1.0 / (k - 1.0) + 1.0);
}

double tau_threshold(double k, double omega) {
  if (omega <= 0.0) throw std::invalid_argument("tau_threshold: omega must be > 0");
  return tau_threshold_scaled(k) / omega;
}

std::vector<DesignPoint> sweep_tau(const UncertaintyBudget& budget, double omega, double k,
                                   const std::vector<double>& tau_grid) {
  double prev = 0.0;
  for (double tau : tau_grid) {
    if (!(tau > 0.0) || tau <= prev) {
      throw std::invalid_argument("sweep_tau: grid must be strictly increasing and positive");
    }
    prev = tau;
  }
  std::vector<DesignPoint> points;
  points.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const SystemParams params(omega, tau);
    DesignPoint pt;
    pt.k = k;
    pt.tau = tau;
    const auto r = ratio_closed_form(params, Gains::cp_line(k, omega));
    if (r.has_value()) {
      pt.r = r;
      pt.p_span = *r * k * budget.xi_hat_span + *r * budget.n_hat_span;
      pt.feasible = true;
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace coptrack
