// Deterministic discrete-event engine: replays a demand trace under one of
// four relocation strategies and collects acceptance / relocation metrics.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relosim/rebalancer.hpp"
#include "relosim/types.hpp"

namespace relosim {

enum class Strategy { none, standard, stackable, autonomous };
enum class PlacementPolicy { proportional_to_outflow, uniform, explicit_counts };
enum class CapacityMode { service, train_car };
enum class StandardSubmode { pair, bike };

const char* strategy_name(Strategy s);
const char* placement_name(PlacementPolicy p);
const char* capacity_mode_name(CapacityMode m);
const char* submode_name(StandardSubmode m);
const char* control_policy_name(ControlPolicy p);
Strategy parse_strategy(const std::string& s);
PlacementPolicy parse_placement(const std::string& s);
CapacityMode parse_capacity_mode(const std::string& s);
StandardSubmode parse_submode(const std::string& s);
ControlPolicy parse_control_policy(const std::string& s);

struct SimulationConfig {
  std::int64_t fleet_size = 350;
  PlacementPolicy placement = PlacementPolicy::proportional_to_outflow;
  std::vector<std::int64_t> explicit_placement;  // with placement == explicit_counts

  Strategy strategy = Strategy::none;
  std::int64_t relocation_interval_s = 900;
  std::int64_t max_train = 8;  // v_T, largest train a relocator may move
  std::int64_t relocator_count = 0;
  std::vector<StationId> relocator_start;  // optional; default round-robin by id

  CapacityMode capacity_mode = CapacityMode::train_car;
  ControlPolicy control_policy = ControlPolicy::conservative_one;
  bool reassign_on_idle = true;
  StandardSubmode standard_submode = StandardSubmode::pair;
  double bike_factor = 3.0;  // approach-leg slowdown for the bike submode

  std::uint64_t seed = 0;  // recorded for provenance; the engine itself is deterministic
  bool check_invariants = false;
  bool record_events = false;
};

struct SimEventRecord {
  std::int64_t time_s = 0;
  std::string kind;
  StationId from = -1;
  StationId to = -1;
  std::int64_t vehicles = 0;
  std::int64_t actor = -1;  // trip id or relocator unit, -1 when not applicable
};

struct SimulationMetrics {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  double acceptance_ratio = 1.0;  // 1.0 for an empty trace
  std::vector<std::int64_t> rejections_per_station;

  // One relocation unit = a worker team: a pair in `pair` submode, otherwise
  // one person. A unit is busy from task departure to recipient arrival.
  std::int64_t relocator_units = 0;
  std::vector<std::int64_t> busy_at_minute;        // units busy at each minute start
  std::vector<std::int64_t> busy_seconds_per_min;  // unit-busy seconds per minute bin
  std::int64_t relocator_drive_seconds = 0;        // sum of task durations

  std::map<std::int64_t, std::int64_t> train_length_hist;  // executed tasks by vehicles moved
  std::int64_t executed_tasks = 0;       // tasks that moved >= 1 vehicle
  std::int64_t total_relocated_vehicles = 0;
  double mean_train_length = 0.0;
  std::int64_t relocation_shortfalls = 0;  // planned-but-unavailable vehicles
  std::int64_t round_trip_requests = 0;    // origin == destination

  std::vector<SimEventRecord> events;  // populated when record_events
};

// Throws ConfigError on an invalid configuration for this trace.
void validate_config(const DemandTrace& trace, const SimulationConfig& cfg);

// Initial per-station vehicle counts under cfg.placement. Proportional mode
// weights stations by trip departures in the first two hours (uniform if the
// early trace is empty); remainders go to the largest fractional parts.
std::vector<std::int64_t> initial_placement(const DemandTrace& trace, const SimulationConfig& cfg);

// Largest train one task may move: 1 for standard; v_T or v_T - 1 for
// stackable (train-car mode spends one slot on the relocator's ride to the
// next feeder); effectively unlimited for autonomous.
std::int64_t effective_train_capacity(const SimulationConfig& cfg);

// Worker teams available for tasks (floor(count/2) in pair submode).
std::int64_t relocator_unit_count(const SimulationConfig& cfg);

SimulationMetrics simulate(const DemandTrace& trace, const SimulationConfig& cfg);

}  // namespace relosim
