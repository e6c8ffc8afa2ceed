#include "magnomech/config.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "magnomech/constants.hpp"
#include "magnomech/errors.hpp"

namespace magnomech::cli {
namespace {

using nlohmann::json;
using model::CouplingMode;
using model::SystemParams;

constexpr double two_pi = constants::two_pi;

json default_config_json() {
  // the reference parameter set, physical coupling mode
  json j;
  j["omega_a_hz"] = 10e9;
  j["omega_b_hz"] = 10e6;
  j["delta_a_hz"] = -10e6;
  j["delta_m_eff_hz"] = 9e6;
  j["kappa_a_hz"] = 1e6;
  j["kappa_m_hz"] = 1e6;
  j["gamma_b_hz"] = 100.0;
  j["g_ma_hz"] = 3.2e6;
  j["temperature_k"] = 10e-3;
  j["coupling"] = {
      {"mode", "physical"},
      {"b0_tesla", 3.9e-5},
      {"g_mb_hz", 0.2},
      {"sphere_diameter_m", 250e-6},
      {"spin_density_per_m3", 4.22e27},
      {"gyromagnetic_ratio_hz_per_t", 28e9},
      {"spin_s", 2.5},
      {"kerr_1mm_hz", 1e-10},
      {"g_mb_eff_hz", 3.2e6},  // used only in direct mode
  };
  j["thresholds"] = {{"low_excitation", 0.01}, {"kerr", 0.25}, {"tripartite", 1e-6}};
  return j;
}

void merge_into(json& base, const json& overlay, const std::string& path) {
  if (!overlay.is_object()) {
    throw ConfigError("config: expected an object at '" + (path.empty() ? "$" : path) + "'");
  }
  for (const auto& [key, value] : overlay.items()) {
    const std::string child = path.empty() ? key : path + "." + key;
    if (value.is_object() && base.contains(key) && base[key].is_object()) {
      merge_into(base[key], value, child);
    } else {
      base[key] = value;
    }
  }
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("config: '" + path + "' must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError("config: '" + path + "' must be an integer");
  return j.get<int>();
}

std::string require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError("config: '" + path + "' must be a string");
  return j.get<std::string>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) {
        ok = true;
        break;
      }
    if (!ok) {
      throw ConfigError("config: unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

SystemParams params_from_json(const json& j) {
  SystemParams p;
  p.omega_a = two_pi * require_number(j.at("omega_a_hz"), "omega_a_hz");
  p.omega_b = two_pi * require_number(j.at("omega_b_hz"), "omega_b_hz");
  p.delta_a = two_pi * require_number(j.at("delta_a_hz"), "delta_a_hz");
  p.delta_m_eff = two_pi * require_number(j.at("delta_m_eff_hz"), "delta_m_eff_hz");
  p.kappa_a = two_pi * require_number(j.at("kappa_a_hz"), "kappa_a_hz");
  p.kappa_m = two_pi * require_number(j.at("kappa_m_hz"), "kappa_m_hz");
  p.gamma_b = two_pi * require_number(j.at("gamma_b_hz"), "gamma_b_hz");
  p.g_ma = two_pi * require_number(j.at("g_ma_hz"), "g_ma_hz");
  p.temperature = require_number(j.at("temperature_k"), "temperature_k");

  const json& c = j.at("coupling");
  reject_unknown_keys(c,
                      {"mode", "b0_tesla", "g_mb_hz", "sphere_diameter_m", "spin_density_per_m3",
                       "gyromagnetic_ratio_hz_per_t", "spin_s", "kerr_1mm_hz", "g_mb_eff_hz"},
                      "coupling");
  const std::string mode = require_string(c.at("mode"), "coupling.mode");
  if (mode == "direct") {
    p.coupling_mode = CouplingMode::Direct;
    p.g_mb_direct = two_pi * require_number(c.at("g_mb_eff_hz"), "coupling.g_mb_eff_hz");
  } else if (mode == "physical") {
    p.coupling_mode = CouplingMode::Physical;
    p.physical.b0 = require_number(c.at("b0_tesla"), "coupling.b0_tesla");
    p.physical.g_mb = two_pi * require_number(c.at("g_mb_hz"), "coupling.g_mb_hz");
    p.physical.sphere_diameter =
        require_number(c.at("sphere_diameter_m"), "coupling.sphere_diameter_m");
    p.physical.spin_density =
        require_number(c.at("spin_density_per_m3"), "coupling.spin_density_per_m3");
    p.physical.gyromagnetic_ratio =
        two_pi * require_number(c.at("gyromagnetic_ratio_hz_per_t"),
                                "coupling.gyromagnetic_ratio_hz_per_t");
    p.physical.spin_s = require_number(c.at("spin_s"), "coupling.spin_s");
    p.physical.kerr_1mm = two_pi * require_number(c.at("kerr_1mm_hz"), "coupling.kerr_1mm_hz");
  } else {
    throw ConfigError("config: 'coupling.mode' must be \"direct\" or \"physical\"");
  }
  return p;
}

sweep::AxisSpec axis_from_json(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"axis", "min_hz", "max_hz", "min_k", "max_k", "min", "max", "points"},
                      path);
  sweep::AxisSpec ax;
  ax.axis = sweep::axis_from_name(require_string(j.at("axis"), path + ".axis"));
  ax.points = require_int(j.at("points"), path + ".points");
  const bool frequency_axis = ax.axis == sweep::Axis::DeltaA ||
                              ax.axis == sweep::Axis::DeltaMEff || ax.axis == sweep::Axis::KappaA;
  if (frequency_axis) {
    if (!j.contains("min_hz") || !j.contains("max_hz")) {
      throw ConfigError("config: '" + path + "' needs min_hz/max_hz for axis '" +
                        std::string(sweep::axis_name(ax.axis)) + "'");
    }
    ax.min = two_pi * require_number(j.at("min_hz"), path + ".min_hz");
    ax.max = two_pi * require_number(j.at("max_hz"), path + ".max_hz");
  } else if (ax.axis == sweep::Axis::Temperature) {
    if (!j.contains("min_k") || !j.contains("max_k")) {
      throw ConfigError("config: '" + path + "' needs min_k/max_k for the temperature axis");
    }
    ax.min = require_number(j.at("min_k"), path + ".min_k");
    ax.max = require_number(j.at("max_k"), path + ".max_k");
  } else {  // GRatio
    if (!j.contains("min") || !j.contains("max")) {
      throw ConfigError("config: '" + path + "' needs min/max for the g_ratio axis");
    }
    ax.min = require_number(j.at("min"), path + ".min");
    ax.max = require_number(j.at("max"), path + ".max");
  }
  return ax;
}

sweep::SweepSpec sweep_from_json(const json& j, const SystemParams& base) {
  reject_unknown_keys(j, {"axes", "outputs", "optimize_delta_a"}, "sweep");
  sweep::SweepSpec spec;
  spec.base = base;
  if (!j.contains("axes") || !j.at("axes").is_array()) {
    throw ConfigError("config: 'sweep.axes' must be an array");
  }
  std::size_t idx = 0;
  for (const json& ax : j.at("axes")) {
    spec.axes.push_back(axis_from_json(ax, "sweep.axes." + std::to_string(idx)));
    ++idx;
  }
  if (!j.contains("outputs") || !j.at("outputs").is_array()) {
    throw ConfigError("config: 'sweep.outputs' must be an array");
  }
  for (const json& o : j.at("outputs")) {
    spec.outputs.push_back(sweep::measure_from_name(require_string(o, "sweep.outputs[]")));
  }
  if (j.contains("optimize_delta_a")) {
    const json& o = j.at("optimize_delta_a");
    reject_unknown_keys(o, {"min_hz", "max_hz", "grid_points"}, "sweep.optimize_delta_a");
    sweep::InnerOptimization opt;
    opt.delta_a_min = two_pi * require_number(o.at("min_hz"), "sweep.optimize_delta_a.min_hz");
    opt.delta_a_max = two_pi * require_number(o.at("max_hz"), "sweep.optimize_delta_a.max_hz");
    if (o.contains("grid_points"))
      opt.grid_points = require_int(o.at("grid_points"), "sweep.optimize_delta_a.grid_points");
    spec.optimize_delta_a = opt;
  }
  return spec;
}

// "--set a.b.c=value" with the value parsed as a JSON literal (or string).
void apply_set_override(json& cfg, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + expr + "'");
  }
  const std::string key_path = expr.substr(0, eq);
  const std::string raw_value = expr.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw_value);
  } catch (const json::exception&) {
    value = raw_value;  // bare strings allowed
  }

  json* node = &cfg;
  std::size_t start = 0;
  while (true) {
    const auto dot = key_path.find('.', start);
    const std::string key = key_path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("--set: empty key segment in '" + key_path + "'");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

model::SystemParams default_params() { return params_from_json(default_config_json()); }

RunConfig parse_config(const ParseInputs& in) {
  json cfg = default_config_json();

  if (in.config_path) {
    std::ifstream f(*in.config_path);
    if (!f) throw ConfigError("cannot open config file '" + *in.config_path + "'");
    json file_cfg;
    try {
      file_cfg = json::parse(f);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    merge_into(cfg, file_cfg, "");
  }
  for (const std::string& expr : in.set_overrides) apply_set_override(cfg, expr);
  if (in.temperature) cfg["temperature_k"] = *in.temperature;

  reject_unknown_keys(cfg,
                      {"omega_a_hz", "omega_b_hz", "delta_a_hz", "delta_m_eff_hz", "kappa_a_hz",
                       "kappa_m_hz", "gamma_b_hz", "g_ma_hz", "temperature_k", "coupling",
                       "thresholds", "sweep", "workers", "out_dir"},
                      "");

  RunConfig rc;
  rc.command = in.command;
  rc.params = params_from_json(cfg);
  rc.params.validate();

  const json& th = cfg.at("thresholds");
  reject_unknown_keys(th, {"low_excitation", "kerr", "tripartite"}, "thresholds");
  rc.thresholds.low_excitation = require_number(th.at("low_excitation"), "thresholds.low_excitation");
  rc.thresholds.kerr = require_number(th.at("kerr"), "thresholds.kerr");
  rc.thresholds.tripartite = require_number(th.at("tripartite"), "thresholds.tripartite");
  if (rc.thresholds.low_excitation <= 0.0 || rc.thresholds.kerr <= 0.0 ||
      rc.thresholds.tripartite <= 0.0) {
    throw ConfigError("config: thresholds must be positive");
  }

  if (cfg.contains("sweep")) {
    rc.sweep_spec = sweep_from_json(cfg.at("sweep"), rc.params);
    rc.sweep_spec->validate();
  }

  if (cfg.contains("out_dir")) rc.out_dir = require_string(cfg.at("out_dir"), "out_dir");
  if (in.out_dir) rc.out_dir = *in.out_dir;

  std::optional<unsigned> workers;
  if (cfg.contains("workers")) {
    const int w = require_int(cfg.at("workers"), "workers");
    if (w < 1) throw ConfigError("config: 'workers' must be >= 1");
    workers = static_cast<unsigned>(w);
  }
  if (in.workers) workers = in.workers;
  rc.workers = resolve_workers(workers);

  if (in.figure) {
    bool known = false;
    for (std::string_view name : sweep::figure_preset_names()) known = known || name == *in.figure;
    if (!known) throw ConfigError("unknown figure preset '" + *in.figure + "'");
    rc.figure = *in.figure;
  }
  return rc;
}

unsigned resolve_workers(std::optional<unsigned> explicit_value) {
  if (explicit_value && *explicit_value >= 1) return *explicit_value;
  if (const char* env = std::getenv("MAGNOMECH_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return k_exit_config;
  if (dynamic_cast<const InstabilityError*>(&e)) return k_exit_instability;
  if (dynamic_cast<const PhysicalityError*>(&e)) return k_exit_unphysical;
  if (dynamic_cast<const IoError*>(&e)) return k_exit_io;
  if (dynamic_cast<const Error*>(&e)) return k_exit_derivation;
  return k_exit_derivation;
}

}  // namespace magnomech::cli
