#pragma once

#include <Eigen/Dense>

namespace coptrack {

/// Natural frequency and sampling period defining the discretized
/// point-mass pendulum. omega is sqrt(g/c_z) of the linearized model.
struct SystemParams {
  double omega;  // 1/s, > 0
  double tau;    // s, >= 0 (tau = 0 freezes the dynamics)

  SystemParams(double omega_, double tau_);
};

/// State [c, cdot]: horizontal CoM position (m) and velocity (m/s).
using StateVec = Eigen::Vector2d;

/// Exact zero-order-hold discretization x+ = A x + B (p - n).
struct StateMatrices {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
};

StateMatrices discretize(const SystemParams& params);

/// One plant step under CoP command `cop` and additive model disturbance `n`.
StateVec step(const StateMatrices& m, const StateVec& x, double cop, double n);

/// Capture point xi = c + cdot / omega.
double capture_point(const SystemParams& params, const StateVec& x);

/// Exact CP propagation over one period: xi+ = e^{wt} (xi - p) + p.
/// Agrees with capture_point(step(...)) when n = 0.
double cp_step(const SystemParams& params, double xi, double cop);

}  // namespace coptrack
