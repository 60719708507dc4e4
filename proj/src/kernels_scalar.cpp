#include "coptrack/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace coptrack::kernels {

void classify_gains_scalar(const double* lambda, const double* k_inv, std::size_t n,
                           double cosh_wt, double ws, double exp_neg_wt, std::uint8_t* stable,
                           std::uint8_t* gray) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(k_inv[i] > 0.0)) {
      stable[i] = 0;
      gray[i] = 0;
      continue;
    }
    const double k = 1.0 / k_inv[i];
    double tr, det;
    jury_terms(k, lambda[i], cosh_wt, ws, tr, det);
    bool st, gr;
    classify_poles(tr, det, exp_neg_wt, st, gr);
    stable[i] = st ? 1 : 0;
    gray[i] = gr ? 1 : 0;
  }
}

double max_abs_signed_sum_scalar(const double* c, std::size_t len) {
  if (len > 30) throw std::invalid_argument("max_abs_signed_sum: len > 30");
  const std::uint64_t total = std::uint64_t{1} << len;
  double best = 0.0;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double term = ((bits >> i) & 1u) ? -c[i] : c[i];
      acc += term;
    }
    const double mag = std::fabs(acc);
    if (mag > best) best = mag;
  }
  return best;
}

void affine_step_scalar(const Mat2& m, double b0, double b1, const double* x0, const double* x1,
                        const double* v, std::size_t n, double* y0, double* y1) {
  for (std::size_t i = 0; i < n; ++i) {
    y0[i] = (m.m00 * x0[i] + m.m01 * x1[i]) + b0 * v[i];
    y1[i] = (m.m10 * x0[i] + m.m11 * x1[i]) + b1 * v[i];
  }
}

std::size_t support_violations_scalar(const double* p0, const double* p1, std::size_t n,
                                      double c0, double c1, const double* d0, const double* d1,
                                      const double* h, std::size_t m) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = p0[i] - c0;
    const double dy = p1[i] - c1;
    bool violated = false;
    for (std::size_t j = 0; j < m; ++j) {
      const double val = std::fabs(d0[j] * dx + d1[j] * dy);
      if (val > h[j]) {
        violated = true;
        break;
      }
    }
    if (violated) ++count;
  }
  return count;
}

void gain_series_scalar(const SeriesBatch& in, double* r, double* w_norm, std::int32_t* terms,
                        std::uint8_t* flag) {
  for (std::size_t i = 0; i < in.n; ++i) {
    double w0 = in.b0[i];
    double w1 = in.b1[i];
    double acc = 0.0;
    std::int32_t t = 0;
    std::uint8_t f = 2;
    while (t < in.max_terms) {
      const double a = in.k0[i] * w0 + in.k1[i] * w1;
      acc += std::fabs(a);
      ++t;
      if (in.threshold != nullptr && acc + 1.0 >= in.threshold[i]) {
        f = 1;
        break;
      }
      const double nw0 = in.m00[i] * w0 + in.m01[i] * w1;
      const double nw1 = in.m10[i] * w0 + in.m11[i] * w1;
      w0 = nw0;
      w1 = nw1;
      if (std::fabs(w0) + std::fabs(w1) <= in.stop_w[i]) {
        f = 0;
        break;
      }
    }
    r[i] = acc + 1.0;
    w_norm[i] = std::fabs(w0) + std::fabs(w1);
    terms[i] = t;
    flag[i] = f;
  }
}

}  // namespace coptrack::kernels
