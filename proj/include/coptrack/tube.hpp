#pragma once

#include <array>
#include <optional>
#include <vector>

#include "coptrack/interval.hpp"
#include "coptrack/stability.hpp"
#include "coptrack/system.hpp"

namespace coptrack {

/// Truncated robust positive invariant tube in (c, cdot) space, stored as a
/// zonotope: center + generators (A+BK)^i B (span(W)/2) for i = 0..count-1,
/// plus a certified bound on everything dropped past the truncation. The
/// tail bound dominates |d . g_i| summed over dropped generators for any
/// unit-norm direction d.
struct Zonotope2D {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> generators;
  double tail_bound = 0.0;

  std::size_t truncation_count() const { return generators.size(); }
};

/// Truncated Minkowski sum of (A+BK)^i B W with tail certified <= eps.
/// The center is exact: it solves (I - A - BK) c = B mid(W), so only the
/// generator list is truncated. Throws std::domain_error for unstable gains
/// and std::invalid_argument for eps <= 0.
Zonotope2D invariant_tube(const SystemParams& params, const Gains& gains, const Interval& w,
                          double eps);

/// Conservative support function: d.center + sum |d.g_i| + tail |d|.
double support(const Zonotope2D& z, const Eigen::Vector2d& dir);

/// Exact membership test for the truncated zonotope inflated by
/// (tail_bound + slack): checks every facet-normal inequality.
bool contains(const Zonotope2D& z, const Eigen::Vector2d& point, double slack = 0.0);

/// Unit facet normals and matching support offsets h_j = sum_i |d_j . g_i|
/// of the truncated zonotope (tail not included). Feed to the membership
/// kernel together with an inflation of tail_bound + slack.
struct FacetForm {
  std::vector<double> d0, d1, h;
};
FacetForm facet_form(const Zonotope2D& z);

/// CoP tracking-error bound K Z + W as a 1-D interval, computed directly as
/// the series (sum_i |K (A+BK)^i B| + 1) span(W) to avoid compounding the
/// 2-D truncation error. Center handled exactly for asymmetric W.
Interval cop_error_interval(const SystemParams& params, const Gains& gains, const Interval& w);

/// Amplification ratio r = sum_i |K (A+BK)^i B| + 1 by series summation,
/// truncated once a geometric majorant of the remainder (contraction
/// measured over the last five terms, safety factor 2) drops below eps.
double ratio_series(const SystemParams& params, const Gains& gains, double eps);

/// Piecewise closed form of the ratio on the capture-point line
/// lambda = 1/omega:
///   r = 1/(k-1) + 2                          when e^{wt} - 1 <= 1/(k-1),
///   r = (2 + (e^{wt}-1)) / (2 - (k-1)(e^{wt}-1))   up to the stability edge,
/// and nullopt once e^{wt} - 1 >= 2/(k-1) (closed loop unstable, ratio
/// undefined). Throws std::domain_error when lambda != 1/omega.
std::optional<double> ratio_closed_form(const SystemParams& params, const Gains& gains);

/// Ratio inside the gray region: 1/(k-1) + 2, independent of lambda, omega
/// and tau. Caller asserts gray-region membership; throws for k <= 1.
double gray_region_ratio(const Gains& gains);

/// Fixed point of h = (A+BK) h + B, i.e. the infinite sum of (A+BK)^i B.
/// Equals [1/(1-k), 0] for every stable gain. Throws for the singular k = 1.
Eigen::Vector2d h_vector(const SystemParams& params, const Gains& gains);

/// Coefficients of the eigenexpansion K (A+BK)^i B = alpha1 q1^i + alpha2 q2^i.
/// Defined only for real distinct poles (and k != 1).
struct AlphaCoeffs {
  double alpha1;
  double alpha2;
};
AlphaCoeffs alpha_coeffs(const SystemParams& params, const Gains& gains);

/// Margin report for reference ranges against tightened constraint sets.
/// tightened = P erode N erode (K Z + W); the K Z + W term is
/// cop_error_interval, i.e. the CoP-side tube bound.
struct FeasibilityReport {
  bool feasible;
  std::optional<Interval> tightened;  // nullopt when the erosion is empty
  double cop_margin;                  // signed; negative means infeasible
  std::optional<double> com_margin;   // room left in the CoM box, if given
};

FeasibilityReport feasibility_check(const Interval& p_ref_range, const Interval& support_polygon,
                                    const Interval& n_set, const SystemParams& params,
                                    const Gains& gains, const Interval& w,
                                    const std::optional<std::array<Interval, 2>>& com_box = {});

}  // namespace coptrack
