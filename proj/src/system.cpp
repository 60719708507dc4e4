#include "coptrack/system.hpp"

#include <cmath>
#include <stdexcept>

namespace coptrack {

SystemParams::SystemParams(double omega_, double tau_) : omega(omega_), tau(tau_) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw std::invalid_argument("SystemParams: omega must be finite and > 0");
  }
  if (!std::isfinite(tau) || tau < 0.0) {
    throw std::invalid_argument("SystemParams: tau must be finite and >= 0");
  }
}

StateMatrices discretize(const SystemParams& params) {
  const double wt = params.omega * params.tau;
  const double ch = std::cosh(wt);
  const double sh = std::sinh(wt);
  StateMatrices m;
  m.a << ch, sh / params.omega,  //
      params.omega * sh, ch;
  m.b << 1.0 - ch, -params.omega * sh;
  return m;
}

StateVec step(const StateMatrices& m, const StateVec& x, double cop, double n) {
  return m.a * x + m.b * (cop - n);
}

double capture_point(const SystemParams& params, const StateVec& x) {
  return x(0) + x(1) / params.omega;
}

double cp_step(const SystemParams& params, double xi, double cop) {
  return std::exp(params.omega * params.tau) * (xi - cop) + cop;
}

}  // namespace coptrack
