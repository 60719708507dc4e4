#include "coptrack/io/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace coptrack::io {

using nlohmann::json;

ExperimentConfig::ExperimentConfig()
    : plan(FootstepPlan::alternating(0.09, 0.8, 6, 1.6, 2.0)) {}

Interval ExperimentConfig::w_set() const {
  if (w.has_value()) return Interval(w->first, w->second);
  const double half = 0.5 * (k * xi_hat_span + n_hat_span);
  return Interval(-half, half);
}

DisturbanceModel ExperimentConfig::disturbance_model() const {
  DisturbanceModel d;
  d.kind = disturbance;
  d.xi_hat_span = xi_hat_span;
  d.n_hat_span = n_hat_span;
  d.seed = seed;
  d.frequency_hz = frequency_hz;
  return d;
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("config: unknown key '" + where + it.key() + "'");
    }
  }
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError("config: '" + where + key + "' must be a number");
  }
  return obj[key].get<double>();
}

std::pair<double, double> get_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("config: '" + where + "' must be [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "", {"system", "gains", "budget", "sets", "simulation", "output"});

  ExperimentConfig cfg;

  if (root.contains("system")) {
    const auto& sys = root["system"];
    check_keys(sys, "system.", {"omega", "tau", "tau_grid_ms", "tau_list_ms"});
    cfg.omega = get_number(sys, "system.", "omega", cfg.omega);
    cfg.tau = get_number(sys, "system.", "tau", cfg.tau);
    if (sys.contains("tau_grid_ms")) {
      const auto& g = sys["tau_grid_ms"];
      if (!g.is_array() || g.size() != 3) {
        throw ConfigError("config: 'system.tau_grid_ms' must be [start, stop, step]");
      }
      const double start = g[0].get<double>(), stop = g[1].get<double>(),
                   step = g[2].get<double>();
      if (!(step > 0.0) || !(start > 0.0) || stop < start) {
        throw ConfigError("config: 'system.tau_grid_ms' must satisfy 0 < start <= stop, step > 0");
      }
      for (double ms = start; ms <= stop + 1e-9; ms += step) {
        cfg.tau_grid.push_back(ms * 1e-3);
      }
    }
    if (sys.contains("tau_list_ms")) {
      if (!sys["tau_list_ms"].is_array()) {
        throw ConfigError("config: 'system.tau_list_ms' must be an array");
      }
      for (const auto& v : sys["tau_list_ms"]) cfg.tau_grid.push_back(v.get<double>() * 1e-3);
    }
  }

  if (root.contains("gains")) {
    const auto& g = root["gains"];
    check_keys(g, "gains.", {"k", "lambda"});
    cfg.k = get_number(g, "gains.", "k", cfg.k);
    if (g.contains("lambda")) {
      if (g["lambda"].is_string()) {
        if (g["lambda"].get<std::string>() != "cp-line") {
          throw ConfigError("config: 'gains.lambda' must be a number or \"cp-line\"");
        }
        cfg.lambda.reset();
      } else if (g["lambda"].is_number()) {
        cfg.lambda = g["lambda"].get<double>();
      } else {
        throw ConfigError("config: 'gains.lambda' must be a number or \"cp-line\"");
      }
    }
  }

  if (root.contains("budget")) {
    const auto& b = root["budget"];
    check_keys(b, "budget.", {"xi_hat_span", "n_hat_span"});
    cfg.xi_hat_span = get_number(b, "budget.", "xi_hat_span", cfg.xi_hat_span);
    cfg.n_hat_span = get_number(b, "budget.", "n_hat_span", cfg.n_hat_span);
  }

  if (root.contains("sets")) {
    const auto& s = root["sets"];
    check_keys(s, "sets.", {"support_polygon", "n_set", "w"});
    if (s.contains("support_polygon")) {
      std::tie(cfg.support_lo, cfg.support_hi) = get_pair(s["support_polygon"],
                                                          "sets.support_polygon");
    }
    if (s.contains("n_set")) {
      std::tie(cfg.n_set_lo, cfg.n_set_hi) = get_pair(s["n_set"], "sets.n_set");
    }
    if (s.contains("w")) cfg.w = get_pair(s["w"], "sets.w");
  }

  if (root.contains("simulation")) {
    const auto& sim = root["simulation"];
    check_keys(sim, "simulation.",
               {"plan", "disturbance", "trials", "seed", "base_tick", "frequency_hz"});
    if (sim.contains("plan")) {
      const auto& plan = sim["plan"];
      check_keys(plan, "simulation.plan.", {"axis", "steps"});
      cfg.plan.steps.clear();
      if (plan.contains("axis")) cfg.plan.axis = plan["axis"].get<std::string>();
      if (!plan.contains("steps") || !plan["steps"].is_array() || plan["steps"].empty()) {
        throw ConfigError("config: 'simulation.plan.steps' must be a nonempty array");
      }
      for (const auto& s : plan["steps"]) {
        const auto [cop, duration] = get_pair(s, "simulation.plan.steps[i]");
        cfg.plan.steps.push_back({cop, duration});
      }
    }
    if (sim.contains("disturbance")) {
      const std::string name = sim["disturbance"].get<std::string>();
      if (name == "worst_case_sign") {
        cfg.disturbance = DisturbanceModel::Kind::worst_case_sign;
      } else if (name == "uniform_random") {
        cfg.disturbance = DisturbanceModel::Kind::uniform_random;
      } else if (name == "constant") {
        cfg.disturbance = DisturbanceModel::Kind::constant;
      } else if (name == "sinusoidal") {
        cfg.disturbance = DisturbanceModel::Kind::sinusoidal;
      } else {
        throw ConfigError("config: unknown 'simulation.disturbance' value '" + name + "'");
      }
    }
    if (sim.contains("trials")) cfg.trials = sim["trials"].get<int>();
    if (sim.contains("seed")) cfg.seed = sim["seed"].get<std::uint64_t>();
    cfg.base_tick = get_number(sim, "simulation.", "base_tick", cfg.base_tick);
    cfg.frequency_hz = get_number(sim, "simulation.", "frequency_hz", cfg.frequency_hz);
  }

  if (root.contains("output")) {
    const auto& out = root["output"];
    check_keys(out, "output.", {"dir", "format", "grid"});
    if (out.contains("dir")) cfg.out_dir = out["dir"].get<std::string>();
    if (out.contains("format")) {
      const std::string f = out["format"].get<std::string>();
      if (f == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (f == "svg") {
        cfg.format = OutputFormat::svg;
      } else if (f == "both") {
        cfg.format = OutputFormat::both;
      } else {
        throw ConfigError("config: 'output.format' must be csv, svg or both");
      }
    }
    if (out.contains("grid")) {
      const long long g = out["grid"].get<long long>();
      if (g < 2 || g > 20000) throw ConfigError("config: 'output.grid' out of range");
      cfg.grid = static_cast<std::size_t>(g);
    }
  }

  return cfg;
}

}  // namespace coptrack::io
