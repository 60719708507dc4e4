#include "coptrack/kernels.hpp"

namespace coptrack::kernels {

namespace {

bool& scalar_override() {
  static bool forced = false;
  return forced;
}

bool cpu_has_avx2() {
#if defined(COPTRACK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

void force_scalar(bool on) { scalar_override() = on; }

bool simd_active() { return avx2_available() && !scalar_override(); }

void classify_gains(const double* lambda, const double* k_inv, std::size_t n, double cosh_wt,
                    double ws, double exp_neg_wt, std::uint8_t* stable, std::uint8_t* gray) {
#if defined(COPTRACK_HAVE_AVX2)
  if (simd_active()) {
    classify_gains_avx2(lambda, k_inv, n, cosh_wt, ws, exp_neg_wt, stable, gray);
    return;
  }
#endif
  classify_gains_scalar(lambda, k_inv, n, cosh_wt, ws, exp_neg_wt, stable, gray);
}

double max_abs_signed_sum(const double* c, std::size_t len) {
#if defined(COPTRACK_HAVE_AVX2)
  if (simd_active()) return max_abs_signed_sum_avx2(c, len);
#endif
  return max_abs_signed_sum_scalar(c, len);
}

void affine_step(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                 const double* v, std::size_t n, double* y0, double* y1) {
#if defined(COPTRACK_HAVE_AVX2)
  if (simd_active()) {
    affine_step_avx2(m, b0, b1, x0, x1, v, n, y0, y1);
    return;
  }
#endif
  affine_step_scalar(m, b0, b1, x0, x1, v, n, y0, y1);
}

std::size_t support_violations(const double* p0, const double* p1, std::size_t n, double c0,
                               double c1, const double* d0, const double* d1, const double* h,
                               std::size_t m) {
#if defined(COPTRACK_HAVE_AVX2)
  if (simd_active()) return support_violations_avx2(p0, p1, n, c0, c1, d0, d1, h, m);
#endif
  return support_violations_scalar(p0, p1, n, c0, c1, d0, d1, h, m);
}

void gain_series(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                 std::uint8_t* flag) {
#if defined(COPTRACK_HAVE_AVX2)
  if (simd_active()) {
    gain_series_avx2(in, r, w_norm, terms, flag);
    return;
  }
#endif
  gain_series_scalar(in, r, w_norm, terms, flag);
}

}  // namespace coptrack::kernels
