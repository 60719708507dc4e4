#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "coptrack/system.hpp"

using namespace coptrack;

TEST_CASE("SystemParams validates its invariants") {
  CHECK_NOTHROW(SystemParams(3.2, 0.0));
  CHECK_THROWS_AS(SystemParams(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(-1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(3.2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams(3.2, std::nan("")), std::invalid_argument);
}

TEST_CASE("discretize: tau = 0 freezes the dynamics") {
  const StateMatrices m = discretize(SystemParams(3.2, 0.0));
  CHECK(m.a.isApprox(Eigen::Matrix2d::Identity()));
  CHECK(m.b.isZero());
}

TEST_CASE("discretize matches extended-precision hyperbolic evaluation") {
  // oracle: long double cosh/sinh of omega*tau
  const double omega = 3.2, tau = 0.1;
  const StateMatrices m = discretize(SystemParams(omega, tau));
  const long double wt = static_cast<long double>(omega) * static_cast<long double>(tau);
  const double ch = static_cast<double>(std::cosh(wt));
  const double sh = static_cast<double>(std::sinh(wt));
  CHECK(m.a(0, 0) == doctest::Approx(ch).epsilon(1e-12));
  CHECK(m.a(0, 1) == doctest::Approx(sh / omega).epsilon(1e-12));
  CHECK(m.a(1, 0) == doctest::Approx(omega * sh).epsilon(1e-12));
  CHECK(m.a(1, 1) == doctest::Approx(ch).epsilon(1e-12));
  CHECK(m.b(0) == doctest::Approx(1.0 - ch).epsilon(1e-12));
  CHECK(m.b(1) == doctest::Approx(-omega * sh).epsilon(1e-12));
}

TEST_CASE("discretize: omega*tau = ln 2 gives cosh = 1.25 exactly") {
  const double omega = 3.2;
  const StateMatrices exact = discretize(SystemParams(omega, std::log(2.0) / omega));
  CHECK(std::fabs(exact.a(0, 0) - 1.25) < 1e-12);
  // the rounded sampling period from the running example stays close
  const StateMatrices rounded = discretize(SystemParams(omega, 0.2166));
  CHECK(std::fabs(rounded.a(0, 0) - 1.25) < 1e-4);
}

TEST_CASE("step: resting on the CoP is an equilibrium") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const SystemParams params(0.5 + 5.0 * std::fabs(u(rng)), 0.4 * std::fabs(u(rng)));
    const StateMatrices m = discretize(params);
    const double p = u(rng);
    const StateVec next = step(m, StateVec(p, 0.0), p, 0.0);
    CHECK(std::fabs(next(0) - p) < 1e-12);
    CHECK(std::fabs(next(1)) < 1e-12);
  }
}

TEST_CASE("step: hand-expanded free evolution") {
  const StateMatrices m = discretize(SystemParams(3.2, 0.1));
  const StateVec next = step(m, StateVec(0.01, 0.0), 0.0, 0.0);
  CHECK(next(0) == doctest::Approx(0.01 * std::cosh(0.32)).epsilon(1e-12));
  CHECK(next(1) == doctest::Approx(0.01 * 3.2 * std::sinh(0.32)).epsilon(1e-12));
}

TEST_CASE("step: two half-steps equal one full step") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double omega = 0.5 + 5.0 * std::fabs(u(rng));
    const double tau = 0.4 * std::fabs(u(rng));
    const StateMatrices full = discretize(SystemParams(omega, tau));
    const StateMatrices half = discretize(SystemParams(omega, 0.5 * tau));
    const StateVec x(u(rng), u(rng));
    const double p = u(rng), n = 0.3 * u(rng);
    const StateVec via_half = step(half, step(half, x, p, n), p, n);
    const StateVec via_full = step(full, x, p, n);
    CHECK((via_half - via_full).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("capture_point basics") {
  const SystemParams params(3.2, 0.1);
  CHECK(capture_point(params, StateVec(0.1, 0.0)) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(capture_point(params, StateVec(0.0, 0.32)) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::fabs(capture_point(params, StateVec(0.05, -0.16))) < 1e-15);
}

TEST_CASE("cp_step: stationary on the CoP, scalar exponential") {
  const SystemParams params(3.2, 0.1);
  CHECK(cp_step(params, 0.25, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cp_step(params, 0.01, 0.0) == doctest::Approx(0.01 * std::exp(0.32)).epsilon(1e-13));
}

TEST_CASE("cp_step agrees with the matrix path on 1000 random inputs") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const SystemParams params(0.5 + 5.0 * std::fabs(u(rng)), 0.4 * std::fabs(u(rng)));
    const StateMatrices m = discretize(params);
    const StateVec x(u(rng), u(rng));
    const double p = u(rng);
    const double via_matrix = capture_point(params, step(m, x, p, 0.0));
    const double via_cp = cp_step(params, capture_point(params, x), p);
    CHECK(std::fabs(via_matrix - via_cp) < 1e-12);
  }
}

TEST_CASE("A is unimodular and has eigenvalues e^{+-omega tau}") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double omega = 0.5 + 7.0 * u(rng);
    const double tau = 3.0 * u(rng) / omega;  // keeps omega*tau <= 3
    const StateMatrices m = discretize(SystemParams(omega, tau));
    CHECK(std::fabs(m.a.determinant() - 1.0) < 1e-12);

    Eigen::EigenSolver<Eigen::Matrix2d> solver(m.a);
    double lo = solver.eigenvalues()(0).real();
    double hi = solver.eigenvalues()(1).real();
    CHECK(std::fabs(solver.eigenvalues()(0).imag()) < 1e-12);
    if (lo > hi) std::swap(lo, hi);
    CHECK(std::fabs(lo - std::exp(-omega * tau)) < 1e-10);
    CHECK(std::fabs(hi - std::exp(omega * tau)) < 1e-10);
  }
}

TEST_CASE("free evolution scales the capture point by e^{omega tau}") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const SystemParams params(0.5 + 5.0 * std::fabs(u(rng)), 0.5 * std::fabs(u(rng)));
    const StateMatrices m = discretize(params);
    const StateVec x(u(rng), u(rng));
    const double xi_before = capture_point(params, x);
    const double xi_after = capture_point(params, step(m, x, 0.0, 0.0));
    CHECK(std::fabs(xi_after - std::exp(params.omega * params.tau) * xi_before) < 1e-10);
  }
}
