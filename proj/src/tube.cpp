#include "coptrack/tube.hpp"

#include <cmath>
#include <stdexcept>

namespace coptrack {

namespace {

constexpr int kContractionWindow = 5;
constexpr int kMinTerms = 8;
constexpr int kMaxSeriesTerms = 2000000;

// Contraction measured across the last `kContractionWindow` terms:
// (norm_now / norm_window_ago)^(1/window). Values >= 1 mean "not yet
// contracting", e.g. during the non-normal transient.
class ContractionMonitor {
 public:
  void push(double norm) {
    history_[next_ % (kContractionWindow + 1)] = norm;
    ++next_;
  }

  double measured() const {
    if (next_ <= kContractionWindow) return 2.0;
    const double now = history_[(next_ - 1) % (kContractionWindow + 1)];
    const double then = history_[next_ % (kContractionWindow + 1)];
    if (!(then > 0.0)) return 0.0;  // sequence already exactly zero
    return std::pow(now / then, 1.0 / kContractionWindow);
  }

 private:
  double history_[kContractionWindow + 1] = {0};
  std::size_t next_ = 0;
};

void require_stable(const SystemParams& params, const Gains& gains, const char* who) {
  if (!is_stable(gains, params).stable) {
    throw std::domain_error(std::string(who) + ": unstable closed loop, series diverges");
  }
}

}  // namespace

double ratio_series(const SystemParams& params, const Gains& gains, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("ratio_series: eps must be > 0");
  require_stable(params, gains, "ratio_series");

  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d m = closed_loop(sm, gains);
  const Eigen::RowVector2d kr = gains.row();
  // |K.w| <= k_amp * (|w0| + |w1|)
  const double k_amp = std::max(std::fabs(kr(0)), std::fabs(kr(1)));

  Eigen::Vector2d w = sm.b;
  double acc = 0.0;
  ContractionMonitor monitor;
  for (int t = 0; t < kMaxSeriesTerms; ++t) {
    acc += std::fabs(kr.dot(w));
    w = m * w;
    const double norm1 = std::fabs(w(0)) + std::fabs(w(1));
    monitor.push(norm1);
    if (t + 1 < kMinTerms) continue;
    const double rho = monitor.measured();
    if (rho < 1.0) {
      const double tail = 2.0 * k_amp * norm1 / (1.0 - rho);
      if (tail <= eps) return acc + 1.0;
    }
  }
  throw std::runtime_error("ratio_series: truncation tolerance not reached");
}

Zonotope2D invariant_tube(const SystemParams& params, const Gains& gains, const Interval& w,
                          double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("invariant_tube: eps must be > 0");
  require_stable(params, gains, "invariant_tube");

  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d m = closed_loop(sm, gains);

  Zonotope2D z;
  // Exact center: fixed point of c = (A+BK) c + B mid(W).
  const double mid = w.mid();
  if (mid != 0.0) {
    const Eigen::Matrix2d im = Eigen::Matrix2d::Identity() - m;
    z.center = im.inverse() * (sm.b * mid);
  }

  const double half_span = 0.5 * w.span();
  if (half_span == 0.0) return z;  // point set, no generators, zero tail

  Eigen::Vector2d g = sm.b * half_span;
  ContractionMonitor monitor;
  for (int t = 0; t < kMaxSeriesTerms; ++t) {
    z.generators.push_back(g);
    g = m * g;
    const double norm2 = g.norm();
    monitor.push(norm2);
    if (t + 1 < kMinTerms) continue;
    const double rho = monitor.measured();
    if (rho < 1.0) {
      const double tail = 2.0 * norm2 / (1.0 - rho);
      if (tail <= eps) {
        z.tail_bound = tail;
        return z;
      }
    }
  }
  throw std::runtime_error("invariant_tube: truncation tolerance not reached");
}

double support(const Zonotope2D& z, const Eigen::Vector2d& dir) {
  if (!dir.allFinite() || dir.isZero()) {
    throw std::invalid_argument("support: direction must be finite and nonzero");
  }
  double s = dir.dot(z.center);
  for (const auto& g : z.generators) s += std::fabs(dir.dot(g));
  return s + z.tail_bound * dir.norm();
}

FacetForm facet_form(const Zonotope2D& z) {
  FacetForm f;
  f.d0.reserve(z.generators.size());
  f.d1.reserve(z.generators.size());
  f.h.reserve(z.generators.size());
  for (const auto& g : z.generators) {
    const double n = g.norm();
    if (n == 0.0) continue;
    // unit normal perpendicular to the generator
    const double d0 = -g(1) / n;
    const double d1 = g(0) / n;
    double h = 0.0;
    for (const auto& gj : z.generators) h += std::fabs(d0 * gj(0) + d1 * gj(1));
    f.d0.push_back(d0);
    f.d1.push_back(d1);
    f.h.push_back(h);
  }
  return f;
}

bool contains(const Zonotope2D& z, const Eigen::Vector2d& point, double slack) {
  if (z.generators.empty()) {
    return (point - z.center).norm() <= z.tail_bound + slack;
  }
  const FacetForm f = facet_form(z);
  const double dx = point(0) - z.center(0);
  const double dy = point(1) - z.center(1);
  const double inflate = z.tail_bound + slack;
  for (std::size_t j = 0; j < f.h.size(); ++j) {
    if (std::fabs(f.d0[j] * dx + f.d1[j] * dy) > f.h[j] + inflate) return false;
  }
  return true;
}

Eigen::Vector2d h_vector(const SystemParams& params, const Gains& gains) {
  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d m = closed_loop(sm, gains);
  const Eigen::Matrix2d im = Eigen::Matrix2d::Identity() - m;
  const double det = im.determinant();  // (1-q1)(1-q2), zero on the k = 1 edge
  if (std::fabs(det) < 1e-12 * (1.0 + im.cwiseAbs().maxCoeff())) {
    throw std::domain_error("h_vector: I - A - BK singular (k = 1)");
  }
  return im.inverse() * sm.b;
}

Interval cop_error_interval(const SystemParams& params, const Gains& gains, const Interval& w) {
  // K Z + W in one dimension: the full series keeps the bound tight instead
  // of stacking the 2-D tube truncation on top of the interval arithmetic.
  const double r = ratio_series(params, gains, 1e-12);
  const double radius = 0.5 * r * w.span();
  double center = 0.0;
  if (w.mid() != 0.0) {
    const Eigen::Vector2d h = h_vector(params, gains);
    center = (gains.row().dot(h) + 1.0) * w.mid();
  }
  return Interval(center - radius, center + radius);
}

std::optional<double> ratio_closed_form(const SystemParams& params, const Gains& gains) {
  if (std::fabs(gains.lambda * params.omega - 1.0) > 1e-12) {
    throw std::domain_error("ratio_closed_form: defined only for lambda = 1/omega");
  }
  const double k = gains.k;
  if (k <= 1.0) return std::nullopt;  // q2 >= 1: unstable, ratio undefined
  const double e = std::expm1(params.omega * params.tau);  // e^{wt} - 1
  const double inv = 1.0 / (k - 1.0);
  if (e <= inv) return inv + 2.0;
  if (e < 2.0 * inv) return (2.0 + e) / (2.0 - (k - 1.0) * e);
  return std::nullopt;
}

double gray_region_ratio(const Gains& gains) {
  if (gains.k <= 1.0) {
    throw std::domain_error("gray_region_ratio: requires k > 1");
  }
  return 1.0 / (gains.k - 1.0) + 2.0;
}

AlphaCoeffs alpha_coeffs(const SystemParams& params, const Gains& gains) {
  const PolePair p = poles(discretize(params), gains);
  if (!p.is_real()) {
    throw std::domain_error("alpha_coeffs: complex poles, eigenexpansion coefficients undefined");
  }
  const double q1 = p.q1.real();
  const double q2 = p.q2.real();
  if (std::fabs(q1 - q2) <= 1e-9 * (1.0 + std::fabs(q1) + std::fabs(q2))) {
    throw std::domain_error("alpha_coeffs: repeated poles, closed loop not diagonalizable here");
  }
  const double k = gains.k;
  if (std::fabs(k - 1.0) < 1e-12) {
    throw std::domain_error("alpha_coeffs: k = 1 is singular");
  }
  AlphaCoeffs a;
  a.alpha1 = (1.0 - q1) / ((k - 1.0) * (q1 - q2)) * (q1 * q2 - 1.0 + k * (1.0 - q1));
  a.alpha2 = (1.0 - q2) / ((k - 1.0) * (q2 - q1)) * (q1 * q2 - 1.0 + k * (1.0 - q2));
  return a;
}

FeasibilityReport feasibility_check(const Interval& p_ref_range, const Interval& support_polygon,
                                    const Interval& n_set, const SystemParams& params,
                                    const Gains& gains, const Interval& w,
                                    const std::optional<std::array<Interval, 2>>& com_box) {
  const Interval kzw = cop_error_interval(params, gains, w);

  // Formal endpoints of P erode N erode (K Z + W); lo > hi marks empty.
  const double t_lo = support_polygon.lo - n_set.lo - kzw.lo;
  const double t_hi = support_polygon.hi - n_set.hi - kzw.hi;

  FeasibilityReport rep;
  rep.cop_margin = std::min(t_hi - p_ref_range.hi, p_ref_range.lo - t_lo);
  if (t_lo <= t_hi) rep.tightened = Interval(t_lo, t_hi);
  rep.feasible = rep.tightened.has_value() && rep.cop_margin >= 0.0;

  if (com_box.has_value()) {
    const Zonotope2D z = invariant_tube(params, gains, w, 1e-9);
    const auto& box = *com_box;
    const double m_pos_c = box[0].hi - support(z, Eigen::Vector2d(1.0, 0.0));
    const double m_neg_c = -box[0].lo - support(z, Eigen::Vector2d(-1.0, 0.0));
    const double m_pos_v = box[1].hi - support(z, Eigen::Vector2d(0.0, 1.0));
    const double m_neg_v = -box[1].lo - support(z, Eigen::Vector2d(0.0, -1.0));
    rep.com_margin = std::min(std::min(m_pos_c, m_neg_c), std::min(m_pos_v, m_neg_v));
  }
  return rep;
}

}  // namespace coptrack
