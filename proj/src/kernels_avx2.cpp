// AVX2 variants of the batch kernels. Compiled with -mavx2 (and without FMA
// contraction) so every lane performs exactly the scalar reference's IEEE
// operation sequence; outputs are bit-identical and tested as such.

#include "coptrack/kernels.hpp"

#if defined(COPTRACK_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace coptrack::kernels {

namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(kSignMask, x); }

inline double reduce_max(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  double best = lane[0];
  for (int i = 1; i < 4; ++i) {
    if (lane[i] > best) best = lane[i];
  }
  return best;
}

}  // namespace

void classify_gains_avx2(const double* lambda, const double* k_inv, std::size_t n, double cosh_wt,
                         double ws, double exp_neg_wt, std::uint8_t* stable, std::uint8_t* gray) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vch = _mm256_set1_pd(cosh_wt);
  const __m256d vws = _mm256_set1_pd(ws);
  const __m256d vexc = _mm256_set1_pd(exp_neg_wt);
  const __m256d vtol = _mm256_set1_pd(kPoleRealTol);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ki = _mm256_loadu_pd(k_inv + i);
    const __m256d lam = _mm256_loadu_pd(lambda + i);
    const __m256d valid = _mm256_cmp_pd(ki, zero, _CMP_GT_OQ);

    const __m256d k = _mm256_div_pd(one, ki);
    const __m256d klws = _mm256_mul_pd(_mm256_mul_pd(k, lam), vws);
    const __m256d det = _mm256_sub_pd(
        _mm256_add_pd(_mm256_sub_pd(one, k), _mm256_mul_pd(k, vch)), klws);
    const __m256d tr = _mm256_sub_pd(
        _mm256_add_pd(k, _mm256_mul_pd(_mm256_sub_pd(two, k), vch)), klws);

    const __m256d j1 = _mm256_sub_pd(one, det);
    const __m256d j2 = _mm256_add_pd(_mm256_sub_pd(det, tr), one);
    const __m256d j3 = _mm256_add_pd(_mm256_add_pd(det, tr), one);
    __m256d st = _mm256_and_pd(_mm256_cmp_pd(j1, zero, _CMP_GT_OQ),
                               _mm256_and_pd(_mm256_cmp_pd(j2, zero, _CMP_GT_OQ),
                                             _mm256_cmp_pd(j3, zero, _CMP_GT_OQ)));

    const __m256d half_tr = _mm256_mul_pd(half, tr);
    const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(half_tr, half_tr), det);
    const __m256d root = _mm256_sqrt_pd(abs_pd(disc));
    const __m256d nonneg = _mm256_cmp_pd(disc, zero, _CMP_GE_OQ);
    const __m256d tol_ok = _mm256_cmp_pd(
        root, _mm256_mul_pd(vtol, _mm256_add_pd(one, abs_pd(half_tr))), _CMP_LE_OQ);
    const __m256d is_real = _mm256_or_pd(nonneg, tol_ok);
    const __m256d s = _mm256_and_pd(nonneg, root);  // 0 when disc < 0
    const __m256d q_lo = _mm256_sub_pd(half_tr, s);
    const __m256d q_hi = _mm256_add_pd(half_tr, s);
    __m256d gr = _mm256_and_pd(is_real,
                               _mm256_and_pd(_mm256_cmp_pd(q_lo, zero, _CMP_GE_OQ),
                                             _mm256_cmp_pd(q_hi, vexc, _CMP_GE_OQ)));

    st = _mm256_and_pd(st, valid);
    gr = _mm256_and_pd(gr, valid);
    const int stm = _mm256_movemask_pd(st);
    const int grm = _mm256_movemask_pd(gr);
    for (int lane = 0; lane < 4; ++lane) {
      stable[i + lane] = (stm >> lane) & 1;
      gray[i + lane] = (grm >> lane) & 1;
    }
  }
  if (i < n) {
    classify_gains_scalar(lambda + i, k_inv + i, n - i, cosh_wt, ws, exp_neg_wt, stable + i,
                          gray + i);
  }
}

double max_abs_signed_sum_avx2(const double* c, std::size_t len) {
  if (len > 30) throw std::invalid_argument("max_abs_signed_sum: len > 30");
  if (len < 2) return max_abs_signed_sum_scalar(c, len);

  const std::uint64_t total = std::uint64_t{1} << len;  // multiple of 4
  const __m256i lane_off = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i ones64 = _mm256_set1_epi64x(1);
  __m256d best = _mm256_setzero_pd();
  for (std::uint64_t base = 0; base < total; base += 4) {
    const __m256i idx = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(base)),
                                         lane_off);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < len; ++i) {
      const __m256i bit = _mm256_and_si256(_mm256_srli_epi64(idx, static_cast<int>(i)), ones64);
      const __m256i smask = _mm256_slli_epi64(bit, 63);
      const __m256d term = _mm256_xor_pd(_mm256_set1_pd(c[i]), _mm256_castsi256_pd(smask));
      acc = _mm256_add_pd(acc, term);
    }
    const __m256d mag = abs_pd(acc);
    const __m256d gt = _mm256_cmp_pd(mag, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, mag, gt);
  }
  return reduce_max(best);
}

void affine_step_avx2(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                      const double* v, std::size_t n, double* y0, double* y1) {
  const __m256d m00 = _mm256_set1_pd(m.m00);
  const __m256d m01 = _mm256_set1_pd(m.m01);
  const __m256d m10 = _mm256_set1_pd(m.m10);
  const __m256d m11 = _mm256_set1_pd(m.m11);
  const __m256d vb0 = _mm256_set1_pd(b0);
  const __m256d vb1 = _mm256_set1_pd(b1);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx0 = _mm256_loadu_pd(x0 + i);
    const __m256d vx1 = _mm256_loadu_pd(x1 + i);
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d t0 = _mm256_add_pd(_mm256_mul_pd(m00, vx0), _mm256_mul_pd(m01, vx1));
    const __m256d t1 = _mm256_add_pd(_mm256_mul_pd(m10, vx0), _mm256_mul_pd(m11, vx1));
    _mm256_storeu_pd(y0 + i, _mm256_add_pd(t0, _mm256_mul_pd(vb0, vv)));
    _mm256_storeu_pd(y1 + i, _mm256_add_pd(t1, _mm256_mul_pd(vb1, vv)));
  }
  if (i < n) {
    affine_step_scalar(m, b0, b1, x0 + i, x1 + i, v + i, n - i, y0 + i, y1 + i);
  }
}

std::size_t support_violations_avx2(const double* p0, const double* p1, std::size_t n, double c0,
                                    double c1, const double* d0, const double* d1, const double* h,
                                    std::size_t m) {
  const __m256d vc0 = _mm256_set1_pd(c0);
  const __m256d vc1 = _mm256_set1_pd(c1);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(p0 + i), vc0);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(p1 + i), vc1);
    __m256d violated = _mm256_setzero_pd();
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d val = abs_pd(_mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(d0[j]), dx),
                                               _mm256_mul_pd(_mm256_set1_pd(d1[j]), dy)));
      violated = _mm256_or_pd(violated, _mm256_cmp_pd(val, _mm256_set1_pd(h[j]), _CMP_GT_OQ));
      if (_mm256_movemask_pd(violated) == 0xF) break;
    }
    count += static_cast<std::size_t>(_mm_popcnt_u32(
        static_cast<unsigned>(_mm256_movemask_pd(violated))));
  }
  if (i < n) {
    count += support_violations_scalar(p0 + i, p1 + i, n - i, c0, c1, d0, d1, h, m);
  }
  return count;
}

void gain_series_avx2(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                      std::uint8_t* flag) {
  const __m256d one = _mm256_set1_pd(1.0);
  const bool use_thr = in.threshold != nullptr;

  std::size_t i = 0;
  for (; i + 4 <= in.n; i += 4) {
    const __m256d m00 = _mm256_loadu_pd(in.m00 + i);
    const __m256d m01 = _mm256_loadu_pd(in.m01 + i);
    const __m256d m10 = _mm256_loadu_pd(in.m10 + i);
    const __m256d m11 = _mm256_loadu_pd(in.m11 + i);
    const __m256d k0 = _mm256_loadu_pd(in.k0 + i);
    const __m256d k1 = _mm256_loadu_pd(in.k1 + i);
    const __m256d stop_w = _mm256_loadu_pd(in.stop_w + i);
    const __m256d thr = use_thr ? _mm256_loadu_pd(in.threshold + i) : one;

    __m256d w0 = _mm256_loadu_pd(in.b0 + i);
    __m256d w1 = _mm256_loadu_pd(in.b1 + i);
    __m256d acc = _mm256_setzero_pd();
    __m256d cnt = _mm256_setzero_pd();
    __m256d flg = _mm256_set1_pd(2.0);
    __m256d active = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));

    for (std::int32_t t = 0; t < in.max_terms; ++t) {
      if (_mm256_movemask_pd(active) == 0) break;
      const __m256d a = _mm256_add_pd(_mm256_mul_pd(k0, w0), _mm256_mul_pd(k1, w1));
      acc = _mm256_add_pd(acc, _mm256_and_pd(abs_pd(a), active));
      cnt = _mm256_add_pd(cnt, _mm256_and_pd(one, active));
      if (use_thr) {
        const __m256d hit = _mm256_and_pd(
            active, _mm256_cmp_pd(_mm256_add_pd(acc, one), thr, _CMP_GE_OQ));
        flg = _mm256_blendv_pd(flg, one, hit);
        active = _mm256_andnot_pd(hit, active);
      }
      const __m256d nw0 = _mm256_add_pd(_mm256_mul_pd(m00, w0), _mm256_mul_pd(m01, w1));
      const __m256d nw1 = _mm256_add_pd(_mm256_mul_pd(m10, w0), _mm256_mul_pd(m11, w1));
      w0 = _mm256_blendv_pd(w0, nw0, active);
      w1 = _mm256_blendv_pd(w1, nw1, active);
      const __m256d wn = _mm256_add_pd(abs_pd(w0), abs_pd(w1));
      const __m256d stop_hit = _mm256_and_pd(active, _mm256_cmp_pd(wn, stop_w, _CMP_LE_OQ));
      flg = _mm256_blendv_pd(flg, _mm256_setzero_pd(), stop_hit);
      active = _mm256_andnot_pd(stop_hit, active);
    }

    alignas(32) double out_r[4], out_wn[4], out_cnt[4], out_flg[4];
    _mm256_store_pd(out_r, _mm256_add_pd(acc, one));
    _mm256_store_pd(out_wn, _mm256_add_pd(abs_pd(w0), abs_pd(w1)));
    _mm256_store_pd(out_cnt, cnt);
    _mm256_store_pd(out_flg, flg);
    for (int lane = 0; lane < 4; ++lane) {
      r[i + lane] = out_r[lane];
      w_norm[i + lane] = out_wn[lane];
      terms[i + lane] = static_cast<std::int32_t>(out_cnt[lane]);
      flag[i + lane] = static_cast<std::uint8_t>(out_flg[lane]);
    }
  }
  if (i < in.n) {
    SeriesBatch tail = in;
    tail.m00 = in.m00 + i;
    tail.m01 = in.m01 + i;
    tail.m10 = in.m10 + i;
    tail.m11 = in.m11 + i;
    tail.k0 = in.k0 + i;
    tail.k1 = in.k1 + i;
    tail.b0 = in.b0 + i;
    tail.b1 = in.b1 + i;
    tail.stop_w = in.stop_w + i;
    tail.threshold = use_thr ? in.threshold + i : nullptr;
    tail.n = in.n - i;
    gain_series_scalar(tail, r + i, w_norm + i, terms + i, flag + i);
  }
}

}  // namespace coptrack::kernels

#endif  // COPTRACK_HAVE_AVX2
