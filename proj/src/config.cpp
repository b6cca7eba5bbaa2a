#include "relosim/config.hpp"

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "relosim/errors.hpp"

namespace relosim {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + " is not valid JSON: " + e.what());
  }
}

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_num(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<T>();
}

std::string get_str(const json& obj, const char* key, const std::string& fallback,
                    const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + " must be a string");
  return obj[key].get<std::string>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return obj[key].get<bool>();
}

std::vector<std::int64_t> get_i64_list(const json& obj, const char* key,
                                       const std::string& where) {
  std::vector<std::int64_t> out;
  if (!obj.contains(key)) return out;
  if (!obj[key].is_array()) throw ConfigError(where + "." + key + " must be an array");
  for (const json& v : obj[key]) {
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must hold integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

// Flattens a matrix given either nested rows or one flat array.
std::vector<double> get_matrix(const json& v, const char* key, const std::string& where) {
  std::vector<double> out;
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array");
  for (const json& row : v) {
    if (row.is_array()) {
      for (const json& x : row) {
        if (!x.is_number()) throw ConfigError(where + "." + key + " must hold numbers");
        out.push_back(x.get<double>());
      }
    } else if (row.is_number()) {
      out.push_back(row.get<double>());
    } else {
      throw ConfigError(where + "." + key + " must hold numbers or rows of numbers");
    }
  }
  return out;
}

}  // namespace

GeneratorConfig parse_generator_config(const std::string& json_text) {
  const json root = parse_json(json_text, "generator config");
  expect_keys(root, {"deployment", "demand", "speed_mps"}, "generator config");
  if (!root.contains("deployment") || !root.contains("demand"))
    throw ConfigError("generator config needs 'deployment' and 'demand' sections");

  GeneratorConfig cfg;
  const json& dep = root["deployment"];
  expect_keys(dep, {"cell_side_m", "min_x_m", "min_y_m", "max_x_m", "max_y_m", "facilities"},
              "deployment");
  cfg.deployment.cell_side_m = get_num<double>(dep, "cell_side_m", 1000.0, "deployment");
  cfg.deployment.min_x_m = get_num<double>(dep, "min_x_m", 0.0, "deployment");
  cfg.deployment.min_y_m = get_num<double>(dep, "min_y_m", 0.0, "deployment");
  cfg.deployment.max_x_m = get_num<double>(dep, "max_x_m", 0.0, "deployment");
  cfg.deployment.max_y_m = get_num<double>(dep, "max_y_m", 0.0, "deployment");
  if (!dep.contains("facilities") || !dep["facilities"].is_array())
    throw ConfigError("deployment.facilities must be an array of [x, y] pairs");
  for (const json& f : dep["facilities"]) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
      throw ConfigError("each facility must be an [x, y] number pair");
    cfg.deployment.facilities.push_back({f[0].get<double>(), f[1].get<double>()});
  }

  const json& dem = root["demand"];
  expect_keys(dem,
              {"preset", "daily_trips", "horizon_s", "seed", "base_rate_per_h", "curves",
               "curve_index"},
              "demand");
  cfg.preset = get_str(dem, "preset", "commuter", "demand");
  if (cfg.preset != "commuter" && cfg.preset != "explicit")
    throw ConfigError("demand.preset must be 'commuter' or 'explicit'");
  cfg.daily_trips = get_num<double>(dem, "daily_trips", 2000.0, "demand");
  cfg.horizon_s = get_num<std::int64_t>(dem, "horizon_s", 86400, "demand");
  cfg.seed = get_num<std::uint64_t>(dem, "seed", 0, "demand");
  if (cfg.preset == "explicit") {
    if (!dem.contains("base_rate_per_h"))
      throw ConfigError("explicit demand preset needs base_rate_per_h");
    cfg.base_rate_per_h = get_matrix(dem["base_rate_per_h"], "base_rate_per_h", "demand");
    if (dem.contains("curves")) {
      for (const json& c : dem["curves"]) {
        const std::vector<double> vals = get_matrix(c, "curves", "demand");
        if (vals.size() != 24) throw ConfigError("each hour curve must list 24 multipliers");
        HourCurve curve{};
        std::copy(vals.begin(), vals.end(), curve.begin());
        cfg.curves.push_back(curve);
      }
    }
    if (dem.contains("curve_index")) {
      for (double v : get_matrix(dem["curve_index"], "curve_index", "demand"))
        cfg.curve_index.push_back(static_cast<int>(v));
    }
  }
  cfg.speed_mps = get_num<double>(root, "speed_mps", kDefaultSpeedMps, "generator config");
  return cfg;
}

DemandProfile build_profile(const GeneratorConfig& cfg, const std::vector<Station>& stations) {
  const int n = static_cast<int>(stations.size());
  if (cfg.preset == "commuter")
    return commuter_profile(stations, cfg.horizon_s, cfg.seed, cfg.daily_trips);

  DemandProfile p = DemandProfile::zero(n, cfg.horizon_s, cfg.seed);
  if (cfg.base_rate_per_h.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("base_rate_per_h has " + std::to_string(cfg.base_rate_per_h.size()) +
                      " entries for " + std::to_string(n) + " stations");
  p.base_rate_per_h = cfg.base_rate_per_h;
  for (int i = 0; i < n; ++i)
    if (p.base_rate_per_h[static_cast<std::size_t>(i) * n + i] != 0.0)
      throw ConfigError("base_rate_per_h diagonal must be zero");
  if (!cfg.curves.empty()) p.curves = cfg.curves;
  if (!cfg.curve_index.empty()) {
    if (cfg.curve_index.size() != static_cast<std::size_t>(n) * n)
      throw ConfigError("curve_index must have one entry per station pair");
    p.curve_index = cfg.curve_index;
  }
  return p;
}

SimulationConfig parse_simulation_config(const std::string& json_text) {
  const json root = parse_json(json_text, "simulation config");
  expect_keys(root,
              {"fleet_size", "placement", "explicit_placement", "strategy",
               "relocation_interval_s", "max_train", "relocator_count", "relocator_start",
               "capacity_mode", "control_policy", "reassign_on_idle", "standard_submode",
               "bike_factor", "seed", "check_invariants", "record_events", "sweep"},
              "simulation config");

  SimulationConfig cfg;
  const std::string w = "simulation config";
  cfg.fleet_size = get_num<std::int64_t>(root, "fleet_size", cfg.fleet_size, w);
  cfg.placement = parse_placement(get_str(root, "placement", placement_name(cfg.placement), w));
  cfg.explicit_placement = get_i64_list(root, "explicit_placement", w);
  cfg.strategy = parse_strategy(get_str(root, "strategy", strategy_name(cfg.strategy), w));
  cfg.relocation_interval_s =
      get_num<std::int64_t>(root, "relocation_interval_s", cfg.relocation_interval_s, w);
  cfg.max_train = get_num<std::int64_t>(root, "max_train", cfg.max_train, w);
  cfg.relocator_count = get_num<std::int64_t>(root, "relocator_count", cfg.relocator_count, w);
  for (std::int64_t s : get_i64_list(root, "relocator_start", w))
    cfg.relocator_start.push_back(static_cast<StationId>(s));
  cfg.capacity_mode =
      parse_capacity_mode(get_str(root, "capacity_mode", capacity_mode_name(cfg.capacity_mode), w));
  cfg.control_policy =
      parse_control_policy(get_str(root, "control_policy", control_policy_name(cfg.control_policy), w));
  cfg.reassign_on_idle = get_bool(root, "reassign_on_idle", cfg.reassign_on_idle, w);
  cfg.standard_submode =
      parse_submode(get_str(root, "standard_submode", submode_name(cfg.standard_submode), w));
  cfg.bike_factor = get_num<double>(root, "bike_factor", cfg.bike_factor, w);
  cfg.seed = get_num<std::uint64_t>(root, "seed", cfg.seed, w);
  cfg.check_invariants = get_bool(root, "check_invariants", cfg.check_invariants, w);
  cfg.record_events = get_bool(root, "record_events", cfg.record_events, w);
  return cfg;
}

SweepSettings parse_sweep_settings(const std::string& json_text) {
  const json root = parse_json(json_text, "simulation config");
  if (!root.contains("sweep") || !root["sweep"].is_object())
    throw ConfigError("config has no 'sweep' object");
  const json& sw = root["sweep"];
  expect_keys(sw, {"strategies", "intervals_s", "train_sizes", "relocator_counts", "threads"},
              "sweep");

  SweepSettings settings;
  if (!sw.contains("strategies") || !sw["strategies"].is_array())
    throw ConfigError("sweep.strategies must be an array of strategy names");
  for (const json& s : sw["strategies"]) {
    if (!s.is_string()) throw ConfigError("sweep.strategies must hold strings");
    settings.grid.strategies.push_back(parse_strategy(s.get<std::string>()));
  }
  settings.grid.intervals_s = get_i64_list(sw, "intervals_s", "sweep");
  settings.grid.train_sizes = get_i64_list(sw, "train_sizes", "sweep");
  settings.grid.relocator_counts = get_i64_list(sw, "relocator_counts", "sweep");
  settings.threads = static_cast<int>(get_num<std::int64_t>(sw, "threads", 1, "sweep"));
  if (settings.threads < 1) throw ConfigError("sweep.threads must be >= 1");
  return settings;
}

std::string simulation_config_to_json(const SimulationConfig& cfg) {
  ordered_json j;
  j["fleet_size"] = cfg.fleet_size;
  j["placement"] = placement_name(cfg.placement);
  if (!cfg.explicit_placement.empty()) j["explicit_placement"] = cfg.explicit_placement;
  j["strategy"] = strategy_name(cfg.strategy);
  j["relocation_interval_s"] = cfg.relocation_interval_s;
  j["max_train"] = cfg.max_train;
  j["relocator_count"] = cfg.relocator_count;
  if (!cfg.relocator_start.empty()) j["relocator_start"] = cfg.relocator_start;
  j["capacity_mode"] = capacity_mode_name(cfg.capacity_mode);
  j["control_policy"] = control_policy_name(cfg.control_policy);
  j["reassign_on_idle"] = cfg.reassign_on_idle;
  j["standard_submode"] = submode_name(cfg.standard_submode);
  j["bike_factor"] = cfg.bike_factor;
  j["seed"] = cfg.seed;
  j["check_invariants"] = cfg.check_invariants;
  j["record_events"] = cfg.record_events;
  return j.dump(2);
}

}  // namespace relosim
