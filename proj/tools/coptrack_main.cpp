// coptrack command line: stability regions, amplification ratios, gain
// design, sampling-period sweeps, closed-loop simulation and self-checks
// for capture-point balance control under bounded uncertainty.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coptrack/design.hpp"
#include "coptrack/interval.hpp"
#include "coptrack/io/config.hpp"
#include "coptrack/io/csv.hpp"
#include "coptrack/io/svg.hpp"
#include "coptrack/kernels.hpp"
#include "coptrack/reference.hpp"
#include "coptrack/simulate.hpp"
#include "coptrack/stability.hpp"
#include "coptrack/system.hpp"
#include "coptrack/tube.hpp"

namespace {

namespace fs = std::filesystem;
using namespace coptrack;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitInfeasible = 3;

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  std::optional<double> omega, tau, k, lambda, xi_span, n_span;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::size_t> grid;
  std::optional<int> trials;
  bool cp_line = false;
  bool no_simd = false;
};

io::ExperimentConfig make_config(const CliOverrides& o) {
  io::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = io::load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.omega) cfg.omega = *o.omega;
  if (o.tau) cfg.tau = *o.tau;
  if (o.k) cfg.k = *o.k;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.cp_line) cfg.lambda.reset();
  if (o.xi_span) cfg.xi_hat_span = *o.xi_span;
  if (o.n_span) cfg.n_hat_span = *o.n_span;
  if (o.seed) cfg.seed = *o.seed;
  if (o.grid) cfg.grid = *o.grid;
  if (o.trials) cfg.trials = *o.trials;
  if (o.format) {
    if (*o.format == "csv") {
      cfg.format = io::OutputFormat::csv;
    } else if (*o.format == "svg") {
      cfg.format = io::OutputFormat::svg;
    } else if (*o.format == "both") {
      cfg.format = io::OutputFormat::both;
    } else {
      throw io::ConfigError("--format must be csv, svg or both");
    }
  }
  if (o.no_simd) kernels::force_scalar(true);
  return cfg;
}

bool want_csv(const io::ExperimentConfig& c) { return c.format != io::OutputFormat::svg; }
bool want_svg(const io::ExperimentConfig& c) { return c.format != io::OutputFormat::csv; }

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--format", o.format, "csv|svg|both");
  cmd->add_option("--omega", o.omega, "natural frequency, 1/s");
  cmd->add_option("--tau", o.tau, "sampling period, s");
  cmd->add_option("--k", o.k, "feedback gain k");
  cmd->add_option("--lambda", o.lambda, "velocity weighting, s");
  cmd->add_flag("--cp-line", o.cp_line, "use lambda = 1/omega");
  cmd->add_option("--xi-span", o.xi_span, "CP estimation error span, m");
  cmd->add_option("--n-span", o.n_span, "model error span, m");
  cmd->add_option("--trials", o.trials, "random-disturbance trials");
  cmd->add_option("--grid", o.grid, "raster resolution");
  cmd->add_flag("--no-simd", o.no_simd, "force scalar kernels");
}

// ---------------------------------------------------------------------------
// stability-region
// ---------------------------------------------------------------------------

int cmd_stability_region(const io::ExperimentConfig& cfg) {
  const SystemParams params = cfg.params();
  const StabilityRegion region = stability_region(params);
  const RegionRaster raster = rasterize_region(params, cfg.grid, cfg.grid);

  std::printf("stability triangle at omega=%g, tau=%g (omega tau = %g)\n", params.omega,
              params.tau, params.omega * params.tau);
  std::printf("  lambda   in (%.6g, %.6g) s\n", region.lambda_min, region.lambda_max);
  std::printf("  1/k      in (%.6g, 1)\n", region.k_inv_min);
  std::printf("  k*lambda < %.6g\n", region.lambda_max);

  if (want_csv(cfg)) {
    io::CsvTable table({"lambda", "k_inv", "stable", "gray"});
    for (std::size_t i = 0; i < raster.lambda.size(); ++i) {
      table.add_row({raster.lambda[i], raster.k_inv[i], static_cast<double>(raster.stable[i]),
                     static_cast<double>(raster.gray[i])});
    }
    const fs::path path = fs::path(cfg.out_dir) / "region.csv";
    table.write(path);
    std::printf("  wrote %s (%zu cells)\n", path.string().c_str(), raster.lambda.size());
  }

  if (want_svg(cfg)) {
    io::LineChart chart("Stable feedback gains", "lambda [s]", "1/k");
    // gray shading: per-lambda-column band of gray & stable cells
    std::vector<double> bx, by_lo, by_hi;
    for (std::size_t i = 0; i < raster.n_lambda; ++i) {
      double lo = 0, hi = 0;
      bool any = false;
      for (std::size_t j = 0; j < raster.n_k_inv; ++j) {
        const std::size_t idx = i * raster.n_k_inv + j;
        if (raster.gray[idx] && raster.stable[idx]) {
          const double kv = raster.k_inv[idx];
          if (!any) {
            lo = hi = kv;
            any = true;
          } else {
            lo = std::min(lo, kv);
            hi = std::max(hi, kv);
          }
        }
      }
      if (any) {
        bx.push_back(raster.lambda[i * raster.n_k_inv]);
        by_lo.push_back(lo);
        by_hi.push_back(hi);
      }
    }
    std::vector<double> px, py;
    for (std::size_t i = 0; i < bx.size(); ++i) {
      px.push_back(bx[i]);
      py.push_back(by_lo[i]);
    }
    for (std::size_t i = bx.size(); i-- > 0;) {
      px.push_back(bx[i]);
      py.push_back(by_hi[i]);
    }
    if (!px.empty()) chart.add_region(px, py, "#999999", 0.45, "gray region");

    // triangle: top edge at 1/k = 1, left edge at lambda_min, hypotenuse
    // from the k*lambda bound (1/k = lambda / lambda_max)
    chart.add_series({region.lambda_min, region.lambda_max, region.lambda_min,
                      region.lambda_min},
                     {1.0, 1.0, region.lambda_min / region.lambda_max, 1.0}, "#d62728", "",
                     "stability boundary", 2.0);
    chart.add_series({region.lambda_min, region.lambda_max},
                     {region.lambda_min / region.lambda_max, 1.0}, "#d62728", "", "", 2.0);
    chart.add_vline(1.0 / params.omega, "#1f77b4", "5,4", "lambda = 1/omega");
    chart.include_x(0.0);
    chart.include_y(0.0);
    chart.include_y(1.05);
    const fs::path path = fs::path(cfg.out_dir) / "region.svg";
    chart.write(path);
    std::printf("  wrote %s\n", path.string().c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ratio
// ---------------------------------------------------------------------------

int cmd_ratio(const io::ExperimentConfig& cfg) {
  const std::vector<double> taus = cfg.tau_grid.empty() ? std::vector<double>{cfg.tau}
                                                        : cfg.tau_grid;
  io::CsvTable table({"k", "tau_s", "omega_tau", "branch", "r", "rk", "defined"});
  std::printf("%8s %10s %10s %8s %12s %12s\n", "k", "tau [s]", "omega*tau", "branch", "r", "r*k");
  bool any_defined = false;
  for (double tau : taus) {
    const SystemParams params(cfg.omega, tau);
    const auto r = ratio_closed_form(params, Gains::cp_line(cfg.k, cfg.omega));
    const double e = std::expm1(params.omega * tau);
    const int branch = !r.has_value() ? 0 : (e <= 1.0 / (cfg.k - 1.0) ? 1 : 2);
    if (r.has_value()) {
      any_defined = true;
      std::printf("%8.4g %10.4g %10.4g %8d %12.8g %12.8g\n", cfg.k, tau, params.omega * tau,
                  branch, *r, *r * cfg.k);
    } else {
      std::printf("%8.4g %10.4g %10.4g %8s %12s %12s\n", cfg.k, tau, params.omega * tau, "-",
                  "undefined", "unstable");
    }
    table.add_row({cfg.k, tau, params.omega * tau, static_cast<double>(branch),
                   r.value_or(std::nan("")), r.has_value() ? *r * cfg.k : std::nan(""),
                   r.has_value() ? 1.0 : 0.0});
  }
  if (want_csv(cfg) && taus.size() > 1) {
    const fs::path path = fs::path(cfg.out_dir) / "ratio.csv";
    table.write(path);
    std::printf("wrote %s\n", path.string().c_str());
  }
  if (!any_defined) {
    std::fprintf(stderr, "ratio: closed loop unstable for every requested tau\n");
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// design
// ---------------------------------------------------------------------------

int cmd_design(const io::ExperimentConfig& cfg) {
  const UncertaintyBudget budget = cfg.budget();
  const OptimalGain opt = optimal_gain(budget);
  const double tau0 = tau_threshold(opt.k_star, cfg.omega);
  std::printf("budget: xi_hat_span = %g m, n_hat_span = %g m\n", budget.xi_hat_span,
              budget.n_hat_span);
  std::printf("optimal gain      k*       = %.10g\n", opt.k_star);
  std::printf("minimal CoP span  p*_span  = %.10g m\n", opt.p_span_star);
  std::printf("threshold         tau0(k*) = %.10g s  (omega = %g)\n", tau0, cfg.omega);
  if (cfg.tau > tau0) {
    std::printf("warning: requested tau = %g s exceeds tau0; the plateau closed form no longer "
                "applies there\n",
                cfg.tau);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-tau
// ---------------------------------------------------------------------------

int cmd_sweep_tau(const io::ExperimentConfig& cfg) {
  std::vector<double> taus = cfg.tau_grid;
  if (taus.empty()) {
    for (double ms = 10.0; ms <= 340.0 + 1e-9; ms += 2.0) taus.push_back(ms * 1e-3);
  }
  const UncertaintyBudget budget = cfg.budget();
  const auto points = sweep_tau(budget, cfg.omega, cfg.k, taus);

  if (want_csv(cfg)) {
    io::CsvTable table({"tau_s", "omega_tau", "k", "r", "rk", "p_span_m", "feasible"});
    for (const auto& pt : points) {
      table.add_row({pt.tau, cfg.omega * pt.tau, pt.k, pt.r.value_or(std::nan("")),
                     pt.r.has_value() ? *pt.r * pt.k : std::nan(""),
                     pt.p_span.value_or(std::nan("")), pt.feasible ? 1.0 : 0.0});
    }
    const fs::path path = fs::path(cfg.out_dir) / "sweep_tau.csv";
    table.write(path);
    std::printf("wrote %s\n", path.string().c_str());
  }
  if (want_svg(cfg)) {
    std::vector<double> xs, ys;
    for (const auto& pt : points) {
      if (pt.feasible) {
        xs.push_back(pt.tau * 1e3);
        ys.push_back(*pt.p_span * 1e2);
      }
    }
    io::LineChart chart("CoP tracking-error span vs sampling period", "tau [ms]",
                        "p span [cm]");
    chart.add_series(xs, ys, "#1f77b4", "", "predicted span");
    chart.add_vline(tau_threshold(cfg.k, cfg.omega) * 1e3, "#2ca02c", "5,4", "tau0");
    chart.add_vline(std::log(1.0 + 2.0 / (cfg.k - 1.0)) / cfg.omega * 1e3, "#d62728", "5,4",
                    "instability");
    chart.include_y(0.0);
    const fs::path path = fs::path(cfg.out_dir) / "sweep_tau.svg";
    chart.write(path);
    std::printf("wrote %s\n", path.string().c_str());
  }

  std::size_t feasible = 0;
  for (const auto& pt : points) feasible += pt.feasible ? 1 : 0;
  std::printf("%zu/%zu sampling periods feasible; tau0 = %.4g s\n", feasible, points.size(),
              tau_threshold(cfg.k, cfg.omega));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

std::string tau_tag(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0fms", tau * 1e3);
  return buf;
}

int cmd_simulate(const io::ExperimentConfig& cfg) {
  const std::vector<double> taus = cfg.tau_grid.empty() ? std::vector<double>{cfg.tau}
                                                        : cfg.tau_grid;
  const Gains gains = cfg.gains();
  const ReferenceTrajectory ref = generate_reference(cfg.plan, cfg.omega, cfg.base_tick);
  const UncertaintyBudget budget = cfg.budget();

  bool any_diverged = false;
  for (double tau : taus) {
    const SystemParams params(cfg.omega, tau);
    const auto trace = rollout(params, gains, ref, cfg.disturbance_model(), StateVec::Zero());
    const auto analytic = combined_span(budget, params, gains.k);
    any_diverged = any_diverged || trace.summary.diverged;

    std::printf("tau = %7.4g s: empirical p~ span = %.6g m", tau, trace.summary.p_err_span);
    if (analytic.has_value()) {
      std::printf("  (analytic bound %.6g m)", *analytic);
    } else {
      std::printf("  (analytic bound undefined: unstable)");
    }
    if (trace.summary.diverged) std::printf("  DIVERGED");
    std::printf("\n");

    const std::string tag = tau_tag(tau);
    if (want_csv(cfg)) {
      io::CsvTable table(
          {"time_s", "c_m", "cdot_mps", "xi_m", "p_m", "xi_ref_m", "p_ref_m", "v_m"});
      for (std::size_t t = 0; t < trace.time.size(); ++t) {
        table.add_row({trace.time[t], trace.c[t], trace.cdot[t], trace.xi[t], trace.p[t],
                       trace.xi_ref[t], trace.p_ref[t], trace.v[t]});
      }
      table.write(fs::path(cfg.out_dir) / ("trace_" + tag + ".csv"));
    }
    if (want_svg(cfg)) {
      // downsample long traces for the plot; the CSV keeps every tick
      const std::size_t stride = std::max<std::size_t>(1, trace.time.size() / 4000);
      std::vector<double> ts, xi, p, xi_ref, p_ref;
      for (std::size_t t = 0; t < trace.time.size(); t += stride) {
        ts.push_back(trace.time[t]);
        xi.push_back(trace.xi[t]);
        p.push_back(trace.p[t]);
        xi_ref.push_back(trace.xi_ref[t]);
        p_ref.push_back(trace.p_ref[t]);
      }
      io::LineChart chart("Closed-loop tracking, tau = " + tag, "time [s]", "position [m]");
      chart.add_series(ts, xi, "#1f77b4", "", "CP");
      chart.add_series(ts, p, "#000000", "6,4", "CoP");
      chart.add_series(ts, xi_ref, "#1f77b4", "2,3", "CP ref");
      chart.add_series(ts, p_ref, "#000000", "2,3", "CoP ref");
      chart.write(fs::path(cfg.out_dir) / ("trace_" + tag + ".svg"));
    }
  }
  if (want_csv(cfg) || want_svg(cfg)) {
    std::printf("wrote per-run trace files under %s\n", cfg.out_dir.c_str());
  }
  if (taus.size() == 1 && any_diverged) return kExitInfeasible;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass;
  double residual;
  std::string note;
};

// series vs closed form on the capture-point line
CheckResult check_series_closed(const io::ExperimentConfig& cfg) {
  double worst = 0.0;
  const int nk = 50, nt = 50;
  for (int j = 0; j < nt; ++j) {
    const double wt = 0.02 + (1.0986 - 0.03) * j / (nt - 1.0);
    const double e = std::expm1(wt);
    for (int i = 0; i < nk; ++i) {
      const double k_max = 1.0 + 2.0 / e;
      const double k = 1.0 + (k_max - 1.0) * (i + 0.5) / nk * 0.98;
      const SystemParams params(cfg.omega, wt / cfg.omega);
      const Gains gains = Gains::cp_line(k, cfg.omega);
      const auto closed = ratio_closed_form(params, gains);
      if (!closed.has_value()) continue;
      const double series = ratio_series(params, gains, 1e-9);
      worst = std::max(worst, std::fabs(series - *closed));
    }
  }
  return {"series-closed", worst <= 1e-7, worst, "max |series - closed| on 50x50 grid"};
}

// gray-region ratio independent of lambda, omega and tau
CheckResult check_gray_lambda(const io::ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int found = 0;
  while (found < 300) {
    const double omega = 0.8 + 7.0 * u(rng);
    const double wt = 0.03 + 1.1 * u(rng);
    const SystemParams params(omega, wt / omega);
    const StabilityRegion region = stability_region(params);
    const double k = 1.0 / (region.k_inv_min + (1.0 - region.k_inv_min) * u(rng));
    const double lambda =
        region.lambda_min + (region.lambda_max / k - region.lambda_min) * u(rng);
    Gains gains(k, lambda);
    if (!is_stable(gains, params).stable || !in_gray_region(gains, params)) continue;
    ++found;
    const double series = ratio_series(params, gains, 1e-9);
    worst = std::max(worst, std::fabs(series - gray_region_ratio(gains)));
  }
  return {"gray-lambda", worst <= 1e-7, worst, "300 random gray-region gains, any lambda"};
}

CheckResult check_invariance(const io::ExperimentConfig& cfg) {
  const SystemParams params(cfg.omega, cfg.tau);
  const Gains gains = cfg.gains();
  const Interval w = cfg.w_set();
  const Zonotope2D z = invariant_tube(params, gains, w, 1e-9);
  const FacetForm facets = facet_form(z);

  const std::size_t n = 2000;
  std::vector<double> x0(n), x1(n), vs(n), y0(n), y1(n);
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t s = 0; s < n; ++s) {
    Eigen::Vector2d pt = z.center;
    for (const auto& g : z.generators) pt += u(rng) * g;
    x0[s] = pt(0);
    x1[s] = pt(1);
    vs[s] = w.mid() + 0.5 * w.span() * u(rng);
  }
  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d cl = closed_loop(sm, gains);
  const kernels::Mat2 m{cl(0, 0), cl(0, 1), cl(1, 0), cl(1, 1)};
  kernels::affine_step(m, sm.b(0), sm.b(1), x0.data(), x1.data(), vs.data(), n, y0.data(),
                       y1.data());
  std::vector<double> h_infl = facets.h;
  for (auto& h : h_infl) h += z.tail_bound + 1e-12;
  const std::size_t violations = kernels::support_violations(
      y0.data(), y1.data(), n, z.center(0), z.center(1), facets.d0.data(), facets.d1.data(),
      h_infl.data(), h_infl.size());
  return {"invariance", violations == 0, static_cast<double>(violations),
          "successors outside the inflated tube"};
}

CheckResult check_brute_force(const io::ExperimentConfig& cfg) {
  const double wt = 0.3;
  const SystemParams params(cfg.omega, wt / cfg.omega);
  const Gains gains = Gains::cp_line(cfg.k, cfg.omega);
  const Interval w = cfg.w_set();
  const double half = 0.5 * w.span();

  const std::size_t len = 14;
  std::vector<double> coeff(len);
  const StateMatrices sm = discretize(params);
  const Eigen::Matrix2d m = closed_loop(sm, gains);
  const Eigen::RowVector2d kr = gains.row();
  Eigen::Vector2d vec = sm.b;
  for (std::size_t i = 0; i < len; ++i) {
    coeff[i] = kr.dot(vec) * half;
    vec = m * vec;
  }
  double sign_value = 0.0;
  for (std::size_t i = 0; i < len; ++i) sign_value += std::fabs(coeff[i]);
  const double brute = kernels::max_abs_signed_sum(coeff.data(), len);
  const bool exact = brute == sign_value;

  const double r = ratio_series(params, gains, 1e-10);
  const double frac = (2.0 * (brute + half)) / (r * w.span());
  const bool pass = exact && frac >= 0.95;
  return {"brute-force", pass, std::fabs(brute - sign_value),
          "2^14 sequences; span fraction " + std::to_string(frac)};
}

CheckResult check_alpha(const io::ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int found = 0;
  while (found < 300) {
    const double omega = 0.8 + 7.0 * u(rng);
    const double wt = 0.03 + 1.1 * u(rng);
    const SystemParams params(omega, wt / omega);
    const StabilityRegion region = stability_region(params);
    const double k = 1.0 / (region.k_inv_min + (1.0 - region.k_inv_min) * u(rng));
    const double lambda =
        region.lambda_min + (region.lambda_max / k - region.lambda_min) * u(rng);
    Gains gains(k, lambda);
    if (!is_stable(gains, params).stable) continue;
    const StateMatrices sm = discretize(params);
    const PolePair p = poles(sm, gains);
    if (!p.is_real() || std::fabs(p.lo() - p.hi()) < 1e-6) continue;
    ++found;
    const AlphaCoeffs a = alpha_coeffs(params, gains);
    const double kb = gains.row().dot(sm.b);
    worst = std::max(worst, std::fabs(a.alpha1 + a.alpha2 - kb));

    const Eigen::Matrix2d m = closed_loop(sm, gains);
    Eigen::Vector2d vec = sm.b;
    for (int i = 0; i <= 20; ++i) {
      const double direct = gains.row().dot(vec);
      const double expanded = a.alpha1 * std::pow(p.lo(), i) + a.alpha2 * std::pow(p.hi(), i);
      worst = std::max(worst, std::fabs(direct - expanded));
      vec = m * vec;
    }
    const Eigen::Vector2d h = h_vector(params, gains);
    worst = std::max(worst, std::fabs(h(0) - 1.0 / (1.0 - gains.k)));
    worst = std::max(worst, std::fabs(h(1)));
  }
  return {"alpha", worst <= 1e-8, worst, "eigenexpansion identities, 300 samples"};
}

CheckResult check_worst_case_sim(const io::ExperimentConfig& cfg) {
  const double tau = 0.12;
  const SystemParams params(cfg.omega, tau);
  const Gains gains = Gains::cp_line(cfg.k, cfg.omega);
  const UncertaintyBudget budget = cfg.budget();
  const auto ref = generate_reference(FootstepPlan::stance(0.0, 40.0), cfg.omega, cfg.base_tick);
  const auto trace =
      rollout(params, gains, ref, DisturbanceModel::worst_case(budget), StateVec::Zero());
  const auto bound = combined_span(budget, params, gains.k);
  if (!bound.has_value()) return {"worst-case-sim", false, 0.0, "bound undefined"};
  const double frac = trace.summary.p_err_span / *bound;
  const bool pass = frac >= 0.95 && frac <= 1.0 + 1e-9;
  return {"worst-case-sim", pass, frac, "empirical/analytic span at tau = 120 ms"};
}

int cmd_verify(const io::ExperimentConfig& cfg, const std::vector<std::string>& selected) {
  using CheckFn = CheckResult (*)(const io::ExperimentConfig&);
  const std::vector<std::pair<std::string, CheckFn>> registry = {
      {"series-closed", check_series_closed}, {"gray-lambda", check_gray_lambda},
      {"invariance", check_invariance},       {"brute-force", check_brute_force},
      {"alpha", check_alpha},                 {"worst-case-sim", check_worst_case_sim},
  };
  bool all_pass = true;
  for (const auto& [name, fn] : registry) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), name) == selected.end()) {
      continue;
    }
    const CheckResult res = fn(cfg);
    std::printf("[%s] %-16s residual=%-12.4g %s\n", res.pass ? "PASS" : "FAIL",
                res.name.c_str(), res.residual, res.note.c_str());
    all_pass = all_pass && res.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coptrack: robust CoM/CoP balance-control analysis toolkit"};
  app.require_subcommand(1);

  CliOverrides opts;
  std::vector<std::string> verify_checks;

  auto* region = app.add_subcommand("stability-region", "emit the stable-gain triangle");
  auto* ratio = app.add_subcommand("ratio", "uncertainty amplification ratio r");
  auto* design = app.add_subcommand("design", "optimal gain, minimal span, tau threshold");
  auto* sweep = app.add_subcommand("sweep-tau", "span vs sampling period sweep");
  auto* simulate = app.add_subcommand("simulate", "closed-loop rollouts with disturbances");
  auto* verify = app.add_subcommand("verify", "run the self-check oracle suite");
  for (auto* cmd : {region, ratio, design, sweep, simulate, verify}) {
    add_common_flags(cmd, opts);
  }
  verify->add_option("--check", verify_checks,
                     "run only the named checks (repeatable): series-closed, gray-lambda, "
                     "invariance, brute-force, alpha, worst-case-sim");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const io::ExperimentConfig cfg = make_config(opts);
    if (region->parsed()) return cmd_stability_region(cfg);
    if (ratio->parsed()) return cmd_ratio(cfg);
    if (design->parsed()) return cmd_design(cfg);
    if (sweep->parsed()) return cmd_sweep_tau(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (verify->parsed()) return cmd_verify(cfg, verify_checks);
  } catch (const io::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
