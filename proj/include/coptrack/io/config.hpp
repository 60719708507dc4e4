#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coptrack/design.hpp"
#include "coptrack/interval.hpp"
#include "coptrack/reference.hpp"
#include "coptrack/simulate.hpp"
#include "coptrack/stability.hpp"

namespace coptrack::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, svg, both };

/// Experiment configuration with the running-example defaults:
/// omega = 3.2 1/s, k = 2, lambda on the capture-point line, 1 cm spans.
/// Loaded from strict JSON (unknown keys rejected); CLI flags override.
struct ExperimentConfig {
  // system
  double omega = 3.2;
  double tau = 0.1;
  std::vector<double> tau_grid;  // seconds; empty means command default

  // gains
  double k = 2.0;
  std::optional<double> lambda;  // nullopt = capture-point line 1/omega

  // budget
  double xi_hat_span = 0.01;
  double n_hat_span = 0.01;

  // sets (endpoints; Interval built on demand)
  double support_lo = -0.045, support_hi = 0.045;
  double n_set_lo = 0.0, n_set_hi = 0.0;
  std::optional<std::pair<double, double>> w;  // default: symmetric combined span

  // simulation
  FootstepPlan plan;  // default set in constructor
  DisturbanceModel::Kind disturbance = DisturbanceModel::Kind::worst_case_sign;
  double frequency_hz = 1.0;
  int trials = 8;
  std::uint64_t seed = 1;
  double base_tick = 1e-3;

  // output
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::both;
  std::size_t grid = 400;

  ExperimentConfig();

  SystemParams params() const { return SystemParams(omega, tau); }
  Gains gains() const { return Gains(k, lambda.value_or(1.0 / omega)); }
  UncertaintyBudget budget() const { return UncertaintyBudget(xi_hat_span, n_hat_span); }
  Interval support_polygon() const { return Interval(support_lo, support_hi); }
  Interval n_set() const { return Interval(n_set_lo, n_set_hi); }
  /// Disturbance set W; defaults to the symmetric set of span k xi + n.
  Interval w_set() const;
  DisturbanceModel disturbance_model() const;
};

/// Throws ConfigError with field context on unknown keys, wrong types or
/// malformed JSON.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace coptrack::io
