// JSON config parsing for the CLI: scenario generation, simulation, and
// sweep settings. Strict about unknown keys so typos fail loudly.
#pragma once

#include <string>
#include <vector>

#include "relosim/demand_gen.hpp"
#include "relosim/simulator.hpp"
#include "relosim/sweep.hpp"

namespace relosim {

struct GeneratorConfig {
  GridDeploymentConfig deployment;
  std::string preset = "commuter";  // "commuter" or "explicit"
  double daily_trips = 2000.0;      // commuter preset

  // explicit preset: full rate matrix and optional hour curves.
  std::vector<double> base_rate_per_h;
  std::vector<HourCurve> curves;
  std::vector<int> curve_index;

  std::int64_t horizon_s = 86400;
  std::uint64_t seed = 0;
  double speed_mps = kDefaultSpeedMps;
};

GeneratorConfig parse_generator_config(const std::string& json_text);

// Builds the demand profile the generator config describes for the deployed
// stations (station count must match an explicit rate matrix).
DemandProfile build_profile(const GeneratorConfig& cfg, const std::vector<Station>& stations);

// Top-level simulation keys; a "sweep" sub-object is permitted and ignored.
SimulationConfig parse_simulation_config(const std::string& json_text);

struct SweepSettings {
  SweepGrid grid;
  int threads = 1;
};

// Reads the "sweep" object of the same config file.
SweepSettings parse_sweep_settings(const std::string& json_text);

// Canonical JSON rendering of a config, for provenance in result files.
std::string simulation_config_to_json(const SimulationConfig& cfg);

}  // namespace relosim
