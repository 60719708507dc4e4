#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "coptrack/system.hpp"

namespace coptrack {

/// Feedback gains in the structured form K = k [1, lambda].
struct Gains {
  double k;       // dimensionless position-error gain
  double lambda;  // s, velocity weighting

  Gains(double k_, double lambda_);
  Eigen::RowVector2d row() const { return Eigen::RowVector2d(k, k * lambda); }
  /// Capture-point gains k [1, 1/omega].
  static Gains cp_line(double k, double omega) { return Gains(k, 1.0 / omega); }
};

/// Closed-loop poles, ordered by real part then imaginary part.
struct PolePair {
  std::complex<double> q1, q2;

  bool is_real() const;
  /// min/max real poles; only meaningful when is_real().
  double lo() const { return q1.real(); }
  double hi() const { return q2.real(); }
};

/// Closed-loop matrix A + B K.
Eigen::Matrix2d closed_loop(const StateMatrices& m, const Gains& g);

/// Roots of z^2 - tr z + det for the closed loop.
PolePair poles(const StateMatrices& m, const Gains& g);

/// Jury test result with the signed slack of each inequality:
///   product_slack       = 1 - q1 q2,
///   pole_at_one_slack   = (q1-1)(q2-1),
///   pole_at_minus_slack = (q1+1)(q2+1).
/// Stable iff all three are strictly positive.
struct StabilityReport {
  bool stable;
  double product_slack;
  double pole_at_one_slack;
  double pole_at_minus_slack;
};

StabilityReport is_stable(const Gains& g, const SystemParams& params);

/// Analytic stability triangle in the (lambda, 1/k) plane:
///   lambda      > lambda_min  = (cosh(wt)-1)/(w sinh(wt)),
///   k           > 1,
///   k * lambda  < lambda_max  = (cosh(wt)+1)/(w sinh(wt)),
/// equivalently 1/k between k_inv_min = (cosh(wt)-1)/(cosh(wt)+1) and 1.
struct StabilityRegion {
  double lambda_min;
  double lambda_max;  // also the bound on k*lambda
  double k_inv_min;
  double k_inv_max;  // always 1

  bool contains(double k, double lambda) const {
    return lambda > lambda_min && k > 1.0 && k * lambda < lambda_max;
  }
};

/// Throws std::domain_error for tau = 0 (sinh = 0, degenerate region).
StabilityRegion stability_region(const SystemParams& params);

/// Pole geometry only: both poles real (within tolerance), nonnegative, and
/// the larger one >= e^{-omega tau}. Does not require stability.
bool in_gray_region(const Gains& g, const SystemParams& params);

/// Rasterized membership grid over a (lambda, 1/k) window, cell centers.
struct RegionRaster {
  std::size_t n_lambda = 0;
  std::size_t n_k_inv = 0;
  std::vector<double> lambda;        // size n_lambda * n_k_inv, row-major in k_inv
  std::vector<double> k_inv;
  std::vector<std::uint8_t> stable;
  std::vector<std::uint8_t> gray;
};

/// Default window covers the triangle with some margin:
/// lambda in [0, 1.1 lambda_max], 1/k in [0, 1.1].
RegionRaster rasterize_region(const SystemParams& params, std::size_t n_lambda,
                              std::size_t n_k_inv);
RegionRaster rasterize_region(const SystemParams& params, std::size_t n_lambda,
                              std::size_t n_k_inv, double lambda_lo, double lambda_hi,
                              double k_inv_lo, double k_inv_hi);

}  // namespace coptrack
