#include "coptrack/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "coptrack/tube.hpp"

namespace coptrack {

namespace {

constexpr double kDivergenceLimit = 1e6;  // m or m/s; far beyond any sane trace

std::size_t control_stride(double control_period, double tick) {
  const double ratio = control_period / tick;
  const double rounded = std::round(ratio);
  if (!(control_period > 0.0) || rounded < 1.0 ||
      std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        "rollout: control period must be a positive integer multiple of the reference tick");
  }
  return static_cast<std::size_t>(rounded);
}

double sign_of(double x) { return x >= 0.0 ? 1.0 : -1.0; }

// Per-control-instant disturbance samples, each in [-span/2, span/2].
struct DisturbanceSamples {
  std::vector<double> xi_hat;
  std::vector<double> n_hat;
};

// The worst-case pattern drives the CoP tracking error to its maximum at
// mid-horizon, then flips every sign to reach the minimum at the end, so a
// single rollout exposes (almost) the full span. Signs follow the
// horizon-reversed series coefficients K (A+BK)^i B of the control period.
DisturbanceSamples worst_case_pattern(const SystemParams& params, const Gains& gains,
                                      const DisturbanceModel& d, std::size_t n) {
  std::vector<double> coeff(n, 0.0);
  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d m = closed_loop(sm, gains);
  const Eigen::RowVector2d kr = gains.row();
  Eigen::Vector2d w = sm.b;
  for (std::size_t i = 0; i < n; ++i) {
    coeff[i] = kr.dot(w);
    w = m * w;
  }

  std::vector<double> s(n, 1.0);
  if (n >= 4) {
    const std::size_t t1 = n / 2;
    const std::size_t t2 = n - 1;
    for (std::size_t t = 0; t < t1; ++t) s[t] = sign_of(coeff[t1 - 1 - t]);
    s[t1] = 1.0;
    for (std::size_t t = t1 + 1; t < t2; ++t) s[t] = -sign_of(coeff[t2 - 1 - t]);
    s[t2] = -1.0;
  } else if (n >= 2) {
    for (std::size_t t = 0; t + 1 < n; ++t) s[t] = sign_of(coeff[n - 2 - t]);
    s[n - 1] = 1.0;
  }

  DisturbanceSamples out;
  out.xi_hat.resize(n);
  out.n_hat.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.xi_hat[t] = s[t] * 0.5 * d.xi_hat_span;
    out.n_hat[t] = s[t] * 0.5 * d.n_hat_span;
  }
  return out;
}

DisturbanceSamples realize(const SystemParams& params, const Gains& gains,
                           const DisturbanceModel& d, std::size_t n, double period) {
  DisturbanceSamples out;
  switch (d.kind) {
    case DisturbanceModel::Kind::worst_case_sign:
      return worst_case_pattern(params, gains, d, n);
    case DisturbanceModel::Kind::uniform_random: {
      out.xi_hat.resize(n);
      out.n_hat.resize(n);
      std::mt19937_64 rng(d.seed);
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (std::size_t t = 0; t < n; ++t) {
        out.xi_hat[t] = u(rng) * d.xi_hat_span;
        out.n_hat[t] = u(rng) * d.n_hat_span;
      }
      return out;
    }
    case DisturbanceModel::Kind::constant:
      out.xi_hat.assign(n, 0.5 * d.xi_hat_span);
      out.n_hat.assign(n, 0.5 * d.n_hat_span);
      return out;
    case DisturbanceModel::Kind::sinusoidal: {
      out.xi_hat.resize(n);
      out.n_hat.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        const double phase = std::sin(2.0 * M_PI * d.frequency_hz * static_cast<double>(t) *
                                      period);
        out.xi_hat[t] = 0.5 * d.xi_hat_span * phase;
        out.n_hat[t] = 0.5 * d.n_hat_span * phase;
      }
      return out;
    }
  }
  throw std::logic_error("rollout: unknown disturbance kind");
}

}  // namespace

DisturbanceModel DisturbanceModel::worst_case(const UncertaintyBudget& b) {
  DisturbanceModel d;
  d.kind = Kind::worst_case_sign;
  d.xi_hat_span = b.xi_hat_span;
  d.n_hat_span = b.n_hat_span;
  return d;
}

DisturbanceModel DisturbanceModel::uniform(const UncertaintyBudget& b, std::uint64_t seed) {
  DisturbanceModel d;
  d.kind = Kind::uniform_random;
  d.xi_hat_span = b.xi_hat_span;
  d.n_hat_span = b.n_hat_span;
  d.seed = seed;
  return d;
}

SimulationTrace rollout(const SystemParams& params, const Gains& gains,
                        const ReferenceTrajectory& ref, const DisturbanceModel& disturbance,
                        const StateVec& initial_error) {
  if (ref.p.size() < 2) throw std::invalid_argument("rollout: empty reference");
  const std::size_t stride = control_stride(params.tau, ref.tick);
  const std::size_t n_ticks = ref.ticks();
  const std::size_t n_controls = (n_ticks - 1) / stride + 1;

  const DisturbanceSamples samples =
      realize(params, gains, disturbance, n_controls, params.tau);

  const StateMatrices m_tick = discretize(SystemParams(params.omega, ref.tick));
  const Eigen::RowVector2d kr = gains.row();

  SimulationTrace trace;
  trace.tick = ref.tick;
  trace.control_stride = stride;
  const std::size_t n_rows = n_ticks + 1;
  trace.time.reserve(n_rows);
  trace.c.reserve(n_rows);
  trace.cdot.reserve(n_rows);
  trace.xi.reserve(n_rows);
  trace.p.reserve(n_rows);
  trace.c_ref.reserve(n_rows);
  trace.cdot_ref.reserve(n_rows);
  trace.xi_ref.reserve(n_rows);
  trace.p_ref.reserve(n_rows);
  trace.v.reserve(n_rows);
  trace.xi_hat.reserve(n_rows);
  trace.n_hat.reserve(n_rows);

  StateVec x(ref.c[0] + initial_error(0), ref.cdot[0] + initial_error(1));
  double held_p = 0.0, held_v = 0.0, held_xi_hat = 0.0, held_n_hat = 0.0;

  for (std::size_t t = 0; t <= n_ticks; ++t) {
    if (t < n_ticks && t % stride == 0) {
      const std::size_t j = t / stride;
      held_xi_hat = samples.xi_hat[j];
      held_n_hat = samples.n_hat[j];
      held_v = gains.k * held_xi_hat + held_n_hat;
      const Eigen::Vector2d err(x(0) - ref.c[t], x(1) - ref.cdot[t]);
      held_p = ref.p[t] + kr.dot(err) + held_v;
      trace.control_ticks.push_back(t);
      trace.p_err_at_control.push_back(held_p - ref.p[t]);
    }
    trace.time.push_back(static_cast<double>(t) * ref.tick);
    trace.c.push_back(x(0));
    trace.cdot.push_back(x(1));
    trace.xi.push_back(x(0) + x(1) / params.omega);
    trace.p.push_back(held_p);
    trace.c_ref.push_back(ref.c[t]);
    trace.cdot_ref.push_back(ref.cdot[t]);
    trace.xi_ref.push_back(ref.xi[t]);
    trace.p_ref.push_back(ref.p[t]);
    trace.v.push_back(held_v);
    trace.xi_hat.push_back(held_xi_hat);
    trace.n_hat.push_back(held_n_hat);

    if (t == n_ticks) break;
    x = step(m_tick, x, held_p, 0.0);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceLimit) {
      trace.summary.diverged = true;
      trace.time.push_back(static_cast<double>(t + 1) * ref.tick);
      trace.c.push_back(x(0));
      trace.cdot.push_back(x(1));
      trace.xi.push_back(x(0) + x(1) / params.omega);
      trace.p.push_back(held_p);
      trace.c_ref.push_back(ref.c[t + 1]);
      trace.cdot_ref.push_back(ref.cdot[t + 1]);
      trace.xi_ref.push_back(ref.xi[t + 1]);
      trace.p_ref.push_back(ref.p[t + 1]);
      trace.v.push_back(held_v);
      trace.xi_hat.push_back(held_xi_hat);
      trace.n_hat.push_back(held_n_hat);
      break;
    }
  }

  auto& s = trace.summary;
  if (!trace.p_err_at_control.empty()) {
    s.p_err_min = trace.p_err_at_control.front();
    s.p_err_max = trace.p_err_at_control.front();
    for (double e : trace.p_err_at_control) {
      s.p_err_min = std::min(s.p_err_min, e);
      s.p_err_max = std::max(s.p_err_max, e);
      s.max_abs_p_err = std::max(s.max_abs_p_err, std::fabs(e));
    }
    s.p_err_span = s.p_err_max - s.p_err_min;
  }
  for (std::size_t t = 0; t < trace.xi.size(); ++t) {
    s.max_abs_xi_err = std::max(s.max_abs_xi_err, std::fabs(trace.xi[t] - trace.xi_ref[t]));
  }
  return trace;
}

std::vector<SweepMeasurement> sweep_and_measure(double omega, const Gains& gains,
                                                const UncertaintyBudget& budget,
                                                const std::vector<double>& tau_list, int trials,
                                                double horizon_s, double base_tick,
                                                std::uint64_t seed) {
  const ReferenceTrajectory ref =
      generate_reference(FootstepPlan::stance(0.0, horizon_s), omega, base_tick);

  std::vector<SweepMeasurement> rows;
  rows.reserve(tau_list.size());
  for (double tau : tau_list) {
    const SystemParams params(omega, tau);
    SweepMeasurement row;
    row.tau = tau;
    row.analytic_span = combined_span(budget, params, gains.k);

    const auto worst = rollout(params, gains, ref, DisturbanceModel::worst_case(budget),
                               StateVec::Zero());
    row.worst_case_span = worst.summary.p_err_span;
    row.diverged = worst.summary.diverged;

    for (int trial = 0; trial < trials; ++trial) {
      const auto rnd = rollout(params, gains, ref,
                               DisturbanceModel::uniform(budget, seed + static_cast<std::uint64_t>(trial)),
                               StateVec::Zero());
      row.random_span_max = std::max(row.random_span_max, rnd.summary.p_err_span);
      row.diverged = row.diverged || rnd.summary.diverged;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coptrack
