#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

// Batch arithmetic kernels backing the grid sweeps, the exhaustive
// disturbance search and the invariance sampling. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. The two variants perform the same IEEE operations in the same
// per-element order (no FMA contraction), so results are bit-identical;
// tests assert exact equality.
//
// This header is Eigen-free on purpose: the AVX2 translation unit is built
// with different target flags and only plain arrays cross that boundary.

namespace coptrack::kernels {

/// 2x2 real matrix, row major.
struct Mat2 {
  double m00, m01, m10, m11;
};

/// Trace and determinant of A + B k [1, lambda] for the hyperbolic A, B.
/// ws = omega * sinh(omega tau). Shared between the classify kernel and the
/// stability module so a grid cell and a Gains query agree exactly.
inline void jury_terms(double k, double lambda, double cosh_wt, double ws, double& tr,
                       double& det) {
  const double klws = (k * lambda) * ws;
  det = ((1.0 - k) + k * cosh_wt) - klws;
  tr = (k + (2.0 - k) * cosh_wt) - klws;
}

/// Relative tolerance deciding when a pole pair counts as real.
inline constexpr double kPoleRealTol = 1e-9;

/// One-point stability / gray classification from trace and determinant.
/// stable: the three Jury residuals 1-det, det-tr+1, det+tr+1 all > 0.
/// gray:   poles real, both >= 0, max pole >= exp(-omega tau).
inline void classify_poles(double tr, double det, double exp_neg_wt, bool& stable, bool& gray) {
  const double j1 = 1.0 - det;
  const double j2 = (det - tr) + 1.0;
  const double j3 = (det + tr) + 1.0;
  stable = (j1 > 0.0) && (j2 > 0.0) && (j3 > 0.0);
  const double half_tr = 0.5 * tr;
  const double disc = half_tr * half_tr - det;
  const double root = std::sqrt(std::fabs(disc));
  const bool is_real = (disc >= 0.0) || (root <= kPoleRealTol * (1.0 + std::fabs(half_tr)));
  const double s = disc >= 0.0 ? root : 0.0;
  const double q_lo = half_tr - s;
  const double q_hi = half_tr + s;
  gray = is_real && (q_lo >= 0.0) && (q_hi >= exp_neg_wt);
}

// ---------------------------------------------------------------------------
// Kernel 1: gain-plane classification
// ---------------------------------------------------------------------------
// Classifies n points of the (lambda, 1/k) plane for a fixed omega*tau.
// Points with k_inv <= 0 are marked neither stable nor gray.
void classify_gains_scalar(const double* lambda, const double* k_inv, std::size_t n,
                           double cosh_wt, double ws, double exp_neg_wt, std::uint8_t* stable,
                           std::uint8_t* gray);

// ---------------------------------------------------------------------------
// Kernel 2: exhaustive extreme-disturbance search
// ---------------------------------------------------------------------------
// max over all 2^len sign vectors s of |sum_i s_i c[i]|. len <= 30.
double max_abs_signed_sum_scalar(const double* c, std::size_t len);

// ---------------------------------------------------------------------------
// Kernel 3: batch affine successor y = M x + b v
// ---------------------------------------------------------------------------
void affine_step_scalar(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                        const double* v, std::size_t n, double* y0, double* y1);

// ---------------------------------------------------------------------------
// Kernel 4: batch support-function membership
// ---------------------------------------------------------------------------
// Counts points p with |d_j . (p - c)| > h[j] for at least one of the m
// facet directions.
std::size_t support_violations_scalar(const double* p0, const double* p1, std::size_t n,
                                      double c0, double c1, const double* d0, const double* d1,
                                      const double* h, std::size_t m);

// ---------------------------------------------------------------------------
// Kernel 5: batch amplification-ratio series
// ---------------------------------------------------------------------------
// Per lane i: starting from w = (b0[i], b1[i]), repeatedly accumulate
// |k0[i] w0 + k1[i] w1| and advance w <- M[i] w. A lane stops when
//   flag 1: acc + 1 >= threshold[i]   (partial sums are monotone, so the
//           series certainly exceeds the threshold),
//   flag 0: |w0| + |w1| <= stop_w[i]  (remaining tail negligible), or
//   flag 2: max_terms reached.
// r[i] = acc + 1, w_norm[i] = |w0|+|w1| at stop, terms[i] = accumulated terms.
struct SeriesBatch {
  const double* m00 = nullptr;
  const double* m01 = nullptr;
  const double* m10 = nullptr;
  const double* m11 = nullptr;
  const double* k0 = nullptr;
  const double* k1 = nullptr;
  const double* b0 = nullptr;
  const double* b1 = nullptr;
  const double* stop_w = nullptr;
  const double* threshold = nullptr;  // optional, may be nullptr
  std::size_t n = 0;
  std::int32_t max_terms = 0;
};

void gain_series_scalar(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                        std::uint8_t* flag);

#if defined(COPTRACK_HAVE_AVX2)
void classify_gains_avx2(const double* lambda, const double* k_inv, std::size_t n, double cosh_wt,
                         double ws, double exp_neg_wt, std::uint8_t* stable, std::uint8_t* gray);
double max_abs_signed_sum_avx2(const double* c, std::size_t len);
void affine_step_avx2(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                      const double* v, std::size_t n, double* y0, double* y1);
std::size_t support_violations_avx2(const double* p0, const double* p1, std::size_t n, double c0,
                                    double c1, const double* d0, const double* d1, const double* h,
                                    std::size_t m);
void gain_series_avx2(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                      std::uint8_t* flag);
#endif

// ---------------------------------------------------------------------------
// Runtime dispatch
// ---------------------------------------------------------------------------
bool avx2_available();
/// Force the scalar path even when AVX2 is available (CLI --no-simd, tests).
void force_scalar(bool on);
bool simd_active();

void classify_gains(const double* lambda, const double* k_inv, std::size_t n, double cosh_wt,
                    double ws, double exp_neg_wt, std::uint8_t* stable, std::uint8_t* gray);
double max_abs_signed_sum(const double* c, std::size_t len);
void affine_step(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                 const double* v, std::size_t n, double* y0, double* y1);
std::size_t support_violations(const double* p0, const double* p1, std::size_t n, double c0,
                               double c1, const double* d0, const double* d1, const double* h,
                               std::size_t m);
void gain_series(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                 std::uint8_t* flag);

}  // namespace coptrack::kernels
