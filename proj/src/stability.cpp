#include "coptrack/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "coptrack/kernels.hpp"

namespace coptrack {

Gains::Gains(double k_, double lambda_) : k(k_), lambda(lambda_) {
  if (!std::isfinite(k) || !std::isfinite(lambda)) {
    throw std::invalid_argument("Gains: k and lambda must be finite");
  }
}

bool PolePair::is_real() const {
  const double im = std::fabs(q1.imag());
  return im <= kernels::kPoleRealTol * (1.0 + std::fabs(q1.real()));
}

Eigen::Matrix2d closed_loop(const StateMatrices& m, const Gains& g) {
  return m.a + m.b * g.row();
}

namespace {

// Same grouping as kernels::jury_terms so grid cells and Gains queries agree.
void trace_det(const Gains& g, const SystemParams& params, double& tr, double& det) {
  const double wt = params.omega * params.tau;
  const double ch = std::cosh(wt);
  const double ws = params.omega * std::sinh(wt);
  kernels::jury_terms(g.k, g.lambda, ch, ws, tr, det);
}

}  // namespace

PolePair poles(const StateMatrices& m, const Gains& g) {
  const Eigen::Matrix2d cl = closed_loop(m, g);
  const double tr = cl.trace();
  const double det = cl.determinant();
  const double half_tr = 0.5 * tr;
  const double disc = half_tr * half_tr - det;
  PolePair p;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    p.q1 = {half_tr - s, 0.0};
    p.q2 = {half_tr + s, 0.0};
  } else {
    const double s = std::sqrt(-disc);
    p.q1 = {half_tr, -s};
    p.q2 = {half_tr, s};
  }
  return p;
}

StabilityReport is_stable(const Gains& g, const SystemParams& params) {
  double tr, det;
  trace_det(g, params, tr, det);
  StabilityReport rep;
  rep.product_slack = 1.0 - det;
  rep.pole_at_one_slack = (det - tr) + 1.0;
  rep.pole_at_minus_slack = (det + tr) + 1.0;
  rep.stable = rep.product_slack > 0.0 && rep.pole_at_one_slack > 0.0 &&
               rep.pole_at_minus_slack > 0.0;
  return rep;
}

StabilityRegion stability_region(const SystemParams& params) {
  if (params.tau <= 0.0) {
    throw std::domain_error("stability_region: degenerate for tau = 0");
  }
  const double wt = params.omega * params.tau;
  const double ch = std::cosh(wt);
  const double sh = std::sinh(wt);
  StabilityRegion r;
  r.lambda_min = (ch - 1.0) / (params.omega * sh);
  r.lambda_max = (ch + 1.0) / (params.omega * sh);
  r.k_inv_min = (ch - 1.0) / (ch + 1.0);
  r.k_inv_max = 1.0;
  return r;
}

bool in_gray_region(const Gains& g, const SystemParams& params) {
  double tr, det;
  trace_det(g, params, tr, det);
  const double exp_neg_wt = std::exp(-params.omega * params.tau);
  bool stable, gray;
  kernels::classify_poles(tr, det, exp_neg_wt, stable, gray);
  return gray;
}

RegionRaster rasterize_region(const SystemParams& params, std::size_t n_lambda,
                              std::size_t n_k_inv) {
  const StabilityRegion region = stability_region(params);
  return rasterize_region(params, n_lambda, n_k_inv, 0.0, 1.1 * region.lambda_max, 0.0, 1.1);
}

RegionRaster rasterize_region(const SystemParams& params, std::size_t n_lambda,
                              std::size_t n_k_inv, double lambda_lo, double lambda_hi,
                              double k_inv_lo, double k_inv_hi) {
  if (n_lambda == 0 || n_k_inv == 0) {
    throw std::invalid_argument("rasterize_region: empty grid");
  }
  const double wt = params.omega * params.tau;
  const double ch = std::cosh(wt);
  const double ws = params.omega * std::sinh(wt);
  const double exp_neg_wt = std::exp(-wt);

  RegionRaster r;
  r.n_lambda = n_lambda;
  r.n_k_inv = n_k_inv;
  const std::size_t n = n_lambda * n_k_inv;
  r.lambda.resize(n);
  r.k_inv.resize(n);
  r.stable.resize(n);
  r.gray.resize(n);

  const double dl = (lambda_hi - lambda_lo) / static_cast<double>(n_lambda);
  const double dk = (k_inv_hi - k_inv_lo) / static_cast<double>(n_k_inv);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_lambda; ++i) {
    const double lam = lambda_lo + (static_cast<double>(i) + 0.5) * dl;
    for (std::size_t j = 0; j < n_k_inv; ++j, ++idx) {
      r.lambda[idx] = lam;
      r.k_inv[idx] = k_inv_lo + (static_cast<double>(j) + 0.5) * dk;
    }
  }
  kernels::classify_gains(r.lambda.data(), r.k_inv.data(), n, ch, ws, exp_neg_wt,
                          r.stable.data(), r.gray.data());
  return r;
}

}  // namespace coptrack
