#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "coptrack/kernels.hpp"
#include "coptrack/stability.hpp"
#include "coptrack/tube.hpp"

using namespace coptrack;
namespace k = coptrack::kernels;

// The AVX2 variants must reproduce the scalar reference bit for bit: same
// IEEE operations in the same per-element order. Every comparison below is
// exact equality.

namespace {

bool have_simd() {
#if defined(COPTRACK_HAVE_AVX2)
  return k::avx2_available();
#else
  return false;
#endif
}

}  // namespace

TEST_CASE("classify_gains: scalar and AVX2 agree bit for bit") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-0.2, 1.4);
  const std::size_t n = 1003;  // odd size exercises the tail path
  std::vector<double> lambda(n), k_inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambda[i] = u(rng);
    k_inv[i] = u(rng);  // includes k_inv <= 0 cells
  }
  const double wt = 0.37;
  const double ch = std::cosh(wt), ws = 3.2 * std::sinh(wt), ex = std::exp(-wt);

  std::vector<std::uint8_t> st_s(n), gr_s(n), st_v(n), gr_v(n);
  k::classify_gains_scalar(lambda.data(), k_inv.data(), n, ch, ws, ex, st_s.data(), gr_s.data());

  if (!have_simd()) return;
#if defined(COPTRACK_HAVE_AVX2)
  k::classify_gains_avx2(lambda.data(), k_inv.data(), n, ch, ws, ex, st_v.data(), gr_v.data());
  CHECK(std::memcmp(st_s.data(), st_v.data(), n) == 0);
  CHECK(std::memcmp(gr_s.data(), gr_v.data(), n) == 0);
#endif
}

TEST_CASE("classify_gains agrees with the Gains-level API") {
  const SystemParams params(3.2, 0.37 / 3.2);
  const double wt = params.omega * params.tau;
  const double ch = std::cosh(wt), ws = params.omega * std::sinh(wt), ex = std::exp(-wt);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.02, 1.2);
  const std::size_t n = 500;
  std::vector<double> lambda(n), k_inv(n);
  std::vector<std::uint8_t> st(n), gr(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambda[i] = u(rng);
    k_inv[i] = u(rng);
  }
  k::classify_gains(lambda.data(), k_inv.data(), n, ch, ws, ex, st.data(), gr.data());
  for (std::size_t i = 0; i < n; ++i) {
    const Gains g(1.0 / k_inv[i], lambda[i]);
    CHECK(static_cast<bool>(st[i]) == is_stable(g, params).stable);
    CHECK(static_cast<bool>(gr[i]) == in_gray_region(g, params));
  }
}

TEST_CASE("max_abs_signed_sum: recursive oracle and SIMD equality") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // independent oracle: depth-first enumeration
  struct Enumerate {
    static double run(const double* c, std::size_t len) {
      double best = 0.0;
      recurse(c, len, 0, 0.0, best);
      return best;
    }
    static void recurse(const double* c, std::size_t len, std::size_t i, double acc,
                        double& best) {
      if (i == len) {
        best = std::max(best, std::fabs(acc));
        return;
      }
      recurse(c, len, i + 1, acc + c[i], best);
      recurse(c, len, i + 1, acc - c[i], best);
    }
  };

  for (std::size_t len : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7},
                          std::size_t{11}}) {
    std::vector<double> c(len);
    for (auto& v : c) v = u(rng);
    const double scalar = k::max_abs_signed_sum_scalar(c.data(), len);
    // the oracle explores signs in a different order; values agree to an ulp
    CHECK(scalar == doctest::Approx(Enumerate::run(c.data(), len)).epsilon(1e-15));
    if (have_simd()) {
#if defined(COPTRACK_HAVE_AVX2)
      CHECK(k::max_abs_signed_sum_avx2(c.data(), len) == scalar);
#endif
    }
  }
  CHECK_THROWS_AS(k::max_abs_signed_sum_scalar(nullptr, 31), std::invalid_argument);
}

TEST_CASE("affine_step: Eigen oracle and SIMD equality") {
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const k::Mat2 m{u(rng), u(rng), u(rng), u(rng)};
  const double b0 = u(rng), b1 = u(rng);
  const std::size_t n = 1001;
  std::vector<double> x0(n), x1(n), v(n), y0(n), y1(n), z0(n), z1(n);
  for (std::size_t i = 0; i < n; ++i) {
    x0[i] = u(rng);
    x1[i] = u(rng);
    v[i] = u(rng);
  }
  k::affine_step_scalar(m, b0, b1, x0.data(), x1.data(), v.data(), n, y0.data(), y1.data());

  const Eigen::Matrix2d em = (Eigen::Matrix2d() << m.m00, m.m01, m.m10, m.m11).finished();
  const Eigen::Vector2d eb(b0, b1);
  for (std::size_t i = 0; i < n; i += 41) {
    const Eigen::Vector2d y = em * Eigen::Vector2d(x0[i], x1[i]) + eb * v[i];
    CHECK(y0[i] == doctest::Approx(y(0)).epsilon(1e-15));
    CHECK(y1[i] == doctest::Approx(y(1)).epsilon(1e-15));
  }

  if (!have_simd()) return;
#if defined(COPTRACK_HAVE_AVX2)
  k::affine_step_avx2(m, b0, b1, x0.data(), x1.data(), v.data(), n, z0.data(), z1.data());
  CHECK(std::memcmp(y0.data(), z0.data(), n * sizeof(double)) == 0);
  CHECK(std::memcmp(y1.data(), z1.data(), n * sizeof(double)) == 0);
#endif
}

TEST_CASE("support_violations: box oracle and SIMD equality") {
  // facets of the unit square: |x| <= 1, |y| <= 1
  const std::vector<double> d0 = {1.0, 0.0};
  const std::vector<double> d1 = {0.0, 1.0};
  const std::vector<double> h = {1.0, 1.0};

  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  const std::size_t n = 997;
  std::vector<double> p0(n), p1(n);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p0[i] = u(rng);
    p1[i] = u(rng);
    if (std::fabs(p0[i] - 0.1) > 1.0 || std::fabs(p1[i] + 0.2) > 1.0) ++expected;
  }
  const std::size_t scalar = k::support_violations_scalar(p0.data(), p1.data(), n, 0.1, -0.2,
                                                          d0.data(), d1.data(), h.data(), 2);
  CHECK(scalar == expected);
  if (have_simd()) {
#if defined(COPTRACK_HAVE_AVX2)
    CHECK(k::support_violations_avx2(p0.data(), p1.data(), n, 0.1, -0.2, d0.data(), d1.data(),
                                     h.data(), 2) == scalar);
#endif
  }
}

namespace {

struct SeriesFixture {
  std::vector<double> m00, m01, m10, m11, k0, k1, b0, b1, stop_w, threshold;
  std::size_t n = 0;

  // random stable closed loops, some lanes given a reachable threshold
  explicit SeriesFixture(std::size_t count, std::uint64_t seed, bool with_threshold) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (n < count) {
      const double omega = 0.8 + 6.0 * u(rng);
      const double wt = 0.05 + 1.0 * u(rng);
      const SystemParams params(omega, wt / omega);
      const StabilityRegion region = stability_region(params);
      const double k_inv = region.k_inv_min + (1.0 - region.k_inv_min) * u(rng);
      const double kk = 1.0 / k_inv;
      const double lambda =
          region.lambda_min + (region.lambda_max - region.lambda_min) * u(rng);
      const Gains g(kk, lambda);
      if (!region.contains(kk, lambda) || !is_stable(g, params).stable) continue;
      ++n;
      const StateMatrices sm = discretize(params);
      const Eigen::Matrix2d cl = closed_loop(sm, g);
      m00.push_back(cl(0, 0));
      m01.push_back(cl(0, 1));
      m10.push_back(cl(1, 0));
      m11.push_back(cl(1, 1));
      k0.push_back(g.row()(0));
      k1.push_back(g.row()(1));
      b0.push_back(sm.b(0));
      b1.push_back(sm.b(1));
      stop_w.push_back(1e-14);
      threshold.push_back(with_threshold && (n % 3 == 0) ? 1.5 : 1e18);
    }
  }

  k::SeriesBatch batch(bool with_threshold) const {
    k::SeriesBatch in;
    in.m00 = m00.data();
    in.m01 = m01.data();
    in.m10 = m10.data();
    in.m11 = m11.data();
    in.k0 = k0.data();
    in.k1 = k1.data();
    in.b0 = b0.data();
    in.b1 = b1.data();
    in.stop_w = stop_w.data();
    in.threshold = with_threshold ? threshold.data() : nullptr;
    in.n = n;
    in.max_terms = 2000000;
    return in;
  }
};

}  // namespace

TEST_CASE("gain_series: scalar equals AVX2 exactly, with and without thresholds") {
  for (bool with_threshold : {false, true}) {
    const SeriesFixture fx(258, 56, with_threshold);  // 258 % 4 != 0: tail path
    std::vector<double> r_s(fx.n), w_s(fx.n), r_v(fx.n), w_v(fx.n);
    std::vector<std::int32_t> t_s(fx.n), t_v(fx.n);
    std::vector<std::uint8_t> f_s(fx.n), f_v(fx.n);
    k::gain_series_scalar(fx.batch(with_threshold), r_s.data(), w_s.data(), t_s.data(),
                          f_s.data());
    if (!have_simd()) return;
#if defined(COPTRACK_HAVE_AVX2)
    k::gain_series_avx2(fx.batch(with_threshold), r_v.data(), w_v.data(), t_v.data(),
                        f_v.data());
    CHECK(std::memcmp(r_s.data(), r_v.data(), fx.n * sizeof(double)) == 0);
    CHECK(std::memcmp(w_s.data(), w_v.data(), fx.n * sizeof(double)) == 0);
    CHECK(std::memcmp(t_s.data(), t_v.data(), fx.n * sizeof(std::int32_t)) == 0);
    CHECK(std::memcmp(f_s.data(), f_v.data(), fx.n) == 0);
#endif
  }
}

TEST_CASE("gain_series matches ratio_series and respects flags") {
  const SeriesFixture fx(64, 57, false);
  std::vector<double> r(fx.n), w(fx.n);
  std::vector<std::int32_t> t(fx.n);
  std::vector<std::uint8_t> f(fx.n);
  k::gain_series(fx.batch(false), r.data(), w.data(), t.data(), f.data());
  for (std::size_t i = 0; i < fx.n; ++i) {
    CHECK(f[i] == 0);  // every stable lane reaches the stop norm
    CHECK(w[i] <= fx.stop_w[i]);
  }
  // spot-check a handful of lanes against the reference implementation
  std::mt19937_64 rng(58);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double om = 0.8 + 6.0 * u(rng);
    const double wt = 0.05 + 0.9 * u(rng);
    const SystemParams params(om, wt / om);
    const Gains g = Gains::cp_line(1.0 + 1.5 * u(rng) + 0.05, om);
    if (!is_stable(g, params).stable) continue;
    const StateMatrices sm = discretize(params);
    const Eigen::Matrix2d cl = closed_loop(sm, g);
    const double m00 = cl(0, 0), m01 = cl(0, 1), m10 = cl(1, 0), m11 = cl(1, 1);
    const double k0 = g.row()(0), k1 = g.row()(1), b0 = sm.b(0), b1 = sm.b(1);
    const double stop = 1e-15;
    k::SeriesBatch in;
    in.m00 = &m00;
    in.m01 = &m01;
    in.m10 = &m10;
    in.m11 = &m11;
    in.k0 = &k0;
    in.k1 = &k1;
    in.b0 = &b0;
    in.b1 = &b1;
    in.stop_w = &stop;
    in.threshold = nullptr;
    in.n = 1;
    in.max_terms = 2000000;
    double rr, ww;
    std::int32_t tt;
    std::uint8_t ff;
    k::gain_series(in, &rr, &ww, &tt, &ff);
    CHECK(rr == doctest::Approx(ratio_series(params, g, 1e-11)).epsilon(1e-9));
  }
}

TEST_CASE("gain_series threshold exit is monotone-sound") {
  // a lane stopped by the threshold really does have a series above it
  const SeriesFixture fx(32, 59, true);
  std::vector<double> r(fx.n), w(fx.n);
  std::vector<std::int32_t> t(fx.n);
  std::vector<std::uint8_t> f(fx.n);
  k::gain_series(fx.batch(true), r.data(), w.data(), t.data(), f.data());
  for (std::size_t i = 0; i < fx.n; ++i) {
    if (f[i] == 1) {
      CHECK(r[i] >= fx.threshold[i]);
      CHECK(fx.threshold[i] < 1e17);
    }
    if (f[i] == 0) {
      // converged below any finite threshold it was given
      if (fx.threshold[i] < 1e17) CHECK(r[i] < fx.threshold[i]);
    }
  }
}

TEST_CASE("force_scalar reroutes the dispatch entry points") {
  const double c[4] = {0.5, -0.25, 0.125, 1.0};
  const double expect = k::max_abs_signed_sum_scalar(c, 4);
  k::force_scalar(true);
  CHECK_FALSE(k::simd_active());
  CHECK(k::max_abs_signed_sum(c, 4) == expect);
  k::force_scalar(false);
  CHECK(k::max_abs_signed_sum(c, 4) == expect);
}
