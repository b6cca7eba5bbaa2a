#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "relosim/demand_gen.hpp"
#include "relosim/errors.hpp"
#include "relosim/fleet_bounds.hpp"
#include "relosim/report.hpp"
#include "relosim/rng.hpp"
#include "relosim/simulator.hpp"
#include "relosim/types.hpp"

using namespace relosim;

namespace {

DemandTrace two_station_trace(std::int64_t t01, std::int64_t t10, std::int64_t horizon = 3600) {
  DemandTrace trace;
  trace.stations = {{0, 0.0, 0.0}, {1, 1000.0, 0.0}};
  trace.travel_times = TravelTimeMatrix(2, 0);
  trace.travel_times.at(0, 1) = t01;
  trace.travel_times.at(1, 0) = t10;
  trace.horizon_s = horizon;
  return trace;
}

SimulationConfig explicit_cfg(std::vector<std::int64_t> placement, Strategy strategy) {
  SimulationConfig cfg;
  cfg.fleet_size = 0;
  for (auto c : placement) cfg.fleet_size += c;
  cfg.placement = PlacementPolicy::explicit_counts;
  cfg.explicit_placement = std::move(placement);
  cfg.strategy = strategy;
  cfg.check_invariants = true;
  return cfg;
}

DemandTrace commuter_trace(int n, double daily_trips, std::uint64_t seed) {
  std::vector<Station> stations;
  for (int i = 0; i < n; ++i) stations.push_back({i, i * 800.0, (i % 2) * 600.0});
  auto profile = commuter_profile(stations, 86400, seed, daily_trips);
  return synthesize_demand(profile, stations, seed);
}

const SimEventRecord* find_event(const SimulationMetrics& m, const std::string& kind,
                                 std::int64_t time_s) {
  for (const auto& e : m.events)
    if (e.kind == kind && e.time_s == time_s) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("empty trace: perfect acceptance by convention") {
  DemandTrace trace = two_station_trace(100, 100);
  auto cfg = explicit_cfg({1, 0}, Strategy::none);
  auto m = simulate(trace, cfg);
  CHECK(m.accepted == 0);
  CHECK(m.rejected == 0);
  CHECK(m.acceptance_ratio == 1.0);
  CHECK(m.relocator_units == 0);
  CHECK(m.busy_at_minute.size() == 60);  // horizon 3600 -> 60 minute bins
}

TEST_CASE("single trip is served iff a vehicle is parked at its origin") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {{0, 0, 1, 500, std::nullopt}};
  SUBCASE("vehicle present") {
    auto m = simulate(trace, explicit_cfg({1, 0}, Strategy::none));
    CHECK(m.accepted == 1);
    CHECK(m.rejected == 0);
    CHECK(m.acceptance_ratio == 1.0);
  }
  SUBCASE("vehicle elsewhere") {
    auto m = simulate(trace, explicit_cfg({0, 1}, Strategy::none));
    CHECK(m.accepted == 0);
    CHECK(m.rejected == 1);
    CHECK(m.acceptance_ratio == 0.0);
    CHECK(m.rejections_per_station == std::vector<std::int64_t>{1, 0});
  }
  SUBCASE("empty fleet rejects everything") {
    auto m = simulate(trace, explicit_cfg({0, 0}, Strategy::none));
    CHECK(m.rejected == 1);
  }
}

TEST_CASE("a vehicle freed by a dropoff serves the next pickup at that instant") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {
      {0, 0, 1, 500, std::nullopt},  // lands at 1 at t=600
      {1, 1, 0, 600, std::nullopt},  // wants a vehicle at 1 at t=600
  };
  auto m = simulate(trace, explicit_cfg({1, 0}, Strategy::none));
  CHECK(m.accepted == 2);
  CHECK(m.rejected == 0);
}

TEST_CASE("round trips are tallied and occupy the vehicle for their duration") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {
      {0, 0, 0, 500, 400},  // round trip holding the vehicle until t=900
      {1, 0, 1, 700, std::nullopt},
      {2, 0, 1, 950, std::nullopt},
  };
  auto m = simulate(trace, explicit_cfg({1, 0}, Strategy::none));
  CHECK(m.round_trip_requests == 1);
  CHECK(m.accepted == 2);  // the t=700 request finds the station empty
  CHECK(m.rejected == 1);
}

TEST_CASE("prefix-max sizing gives exactly 100% acceptance without relocation") {
  Xoshiro256pp rng(2025);
  for (int round = 0; round < 10; ++round) {
    DemandTrace trace = commuter_trace(5, 120.0, 9000 + round);
    if (trace.trips.empty()) continue;
    auto sizing = min_fleet_no_relocation(trace);
    auto cfg = explicit_cfg(sizing.initial_vehicles, Strategy::none);
    auto m = simulate(trace, cfg);
    CHECK(m.acceptance_ratio == 1.0);

    // Tightness: removing one vehicle from any stocked station rejects
    // someone.
    for (std::size_t i = 0; i < sizing.initial_vehicles.size(); ++i) {
      if (sizing.initial_vehicles[i] == 0) continue;
      auto reduced = sizing.initial_vehicles;
      reduced[i] -= 1;
      auto m2 = simulate(trace, explicit_cfg(reduced, Strategy::none));
      CHECK(m2.rejected > 0);
    }
  }
}

TEST_CASE("standard relocation rescues an otherwise-rejected request") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {{0, 1, 0, 1000, std::nullopt}};

  auto none = simulate(trace, explicit_cfg({2, 0}, Strategy::none));
  CHECK(none.accepted == 0);

  auto cfg = explicit_cfg({2, 0}, Strategy::standard);
  cfg.relocation_interval_s = 900;
  cfg.relocator_count = 2;  // one pair team
  cfg.record_events = true;
  auto m = simulate(trace, cfg);
  CHECK(m.relocator_units == 1);
  CHECK(m.accepted == 1);
  CHECK(m.rejected == 0);
  CHECK(m.executed_tasks == 1);
  CHECK(m.total_relocated_vehicles == 1);
  CHECK(m.relocator_drive_seconds == 100);  // depart 900, arrive 1000
  REQUIRE(m.train_length_hist.count(1) == 1);
  CHECK(m.train_length_hist.at(1) == 1);
  CHECK(m.mean_train_length == 1.0);

  // Timeline: tick 900 -> load at the feeder at 900 -> arrival at 1000,
  // which lands before the pickup at the same instant.
  CHECK(find_event(m, "task_depart", 900) != nullptr);
  CHECK(find_event(m, "task_load", 900) != nullptr);
  CHECK(find_event(m, "relocation_arrival", 1000) != nullptr);
  CHECK(find_event(m, "pickup_accepted", 1000) != nullptr);

  // Busy series: span [900, 1000) -> 60 s in minute 15, 40 s in minute 16.
  CHECK(m.busy_at_minute[15] == 1);
  CHECK(m.busy_at_minute[16] == 1);
  CHECK(m.busy_at_minute[17] == 0);
  CHECK(m.busy_seconds_per_min[15] == 60);
  CHECK(m.busy_seconds_per_min[16] == 40);
  std::int64_t integral = 0;
  for (auto s : m.busy_seconds_per_min) integral += s;
  CHECK(integral == m.relocator_drive_seconds);
}

TEST_CASE("stackable trains clear a surge a single standard unit cannot") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {
      {0, 1, 0, 1000, std::nullopt},
      {1, 1, 0, 1010, std::nullopt},
      {2, 1, 0, 1020, std::nullopt},
      {3, 1, 0, 1030, std::nullopt},
  };

  auto base = explicit_cfg({4, 0}, Strategy::standard);
  base.relocation_interval_s = 900;
  base.relocator_count = 2;  // one unit either way

  SUBCASE("standard moves one vehicle per task and loses the surge") {
    auto m = simulate(trace, base);
    CHECK(m.accepted == 1);
    CHECK(m.rejected == 3);
    CHECK(m.executed_tasks == 4);  // reassign-on-idle works through the backlog
    CHECK(m.total_relocated_vehicles == 4);
    CHECK(m.mean_train_length == 1.0);
    CHECK(m.relocator_drive_seconds == 100 + 200 + 200 + 200);
    std::int64_t integral = 0;
    for (auto s : m.busy_seconds_per_min) integral += s;
    CHECK(integral == m.relocator_drive_seconds);
  }

  SUBCASE("without reassign-on-idle the backlog is never revisited") {
    auto cfg = base;
    cfg.reassign_on_idle = false;
    auto m = simulate(trace, cfg);
    CHECK(m.executed_tasks == 1);
    CHECK(m.total_relocated_vehicles == 1);
  }

  SUBCASE("a service-capacity train of 4 serves every request") {
    auto cfg = base;
    cfg.strategy = Strategy::stackable;
    cfg.capacity_mode = CapacityMode::service;
    cfg.max_train = 4;
    auto m = simulate(trace, cfg);
    CHECK(m.accepted == 4);
    CHECK(m.rejected == 0);
    CHECK(m.executed_tasks == 1);
    CHECK(m.total_relocated_vehicles == 4);
    CHECK(m.mean_train_length == 4.0);
    REQUIRE(m.train_length_hist.count(4) == 1);
    CHECK(m.train_length_hist.at(4) == 1);
  }

  SUBCASE("train-car mode spends one slot on the relocator's ride") {
    auto cfg = base;
    cfg.strategy = Strategy::stackable;
    cfg.capacity_mode = CapacityMode::train_car;
    cfg.max_train = 4;  // only 3 vehicles deliverable per task
    auto m = simulate(trace, cfg);
    CHECK(m.accepted == 3);
    CHECK(m.rejected == 1);
  }

  SUBCASE("autonomous matches the big-train outcome without relocators") {
    auto cfg = explicit_cfg({4, 0}, Strategy::autonomous);
    cfg.relocation_interval_s = 900;
    auto m = simulate(trace, cfg);
    CHECK(m.relocator_units == 0);
    CHECK(m.accepted == 4);
    CHECK(m.total_relocated_vehicles == 4);
    CHECK(m.executed_tasks == 0);  // no worker tasks, only vehicle movements
    CHECK(m.relocator_drive_seconds == 0);
  }
}

TEST_CASE("the backlog is discarded at the next planning tick") {
  DemandTrace trace = two_station_trace(/*t01=*/950, /*t10=*/100, /*horizon=*/2700);
  trace.trips = {
      {0, 1, 0, 1000, 100},
      {1, 1, 0, 1010, 100},
  };
  auto cfg = explicit_cfg({3, 0}, Strategy::standard);
  cfg.relocation_interval_s = 900;
  cfg.relocator_count = 2;  // one unit
  cfg.reassign_on_idle = true;
  auto m = simulate(trace, cfg);
  // Tick 900 pairs two single-vehicle moves but the only unit is stuck on a
  // 950 s leg across tick 1800, which voids the second pair; when the unit
  // idles at 1850 there is nothing left to pick up.
  CHECK(m.executed_tasks == 1);
  CHECK(m.total_relocated_vehicles == 1);
}

TEST_CASE("bike submode: approach leg is slower, selection and driving are not") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.trips = {{0, 1, 0, 1500, std::nullopt}};
  auto cfg = explicit_cfg({2, 0}, Strategy::standard);
  cfg.relocation_interval_s = 900;
  cfg.standard_submode = StandardSubmode::bike;
  cfg.relocator_count = 1;  // bike units are single workers
  cfg.relocator_start = {1};
  cfg.bike_factor = 3.0;
  cfg.record_events = true;
  auto m = simulate(trace, cfg);
  CHECK(m.relocator_units == 1);
  // Depart 900; approach 1 -> 0 takes 3 x 100 = 300; drive 0 -> 1 takes 100.
  CHECK(find_event(m, "task_depart", 900) != nullptr);
  CHECK(find_event(m, "task_load", 1200) != nullptr);
  CHECK(find_event(m, "relocation_arrival", 1300) != nullptr);
  CHECK(m.relocator_drive_seconds == 400);
  CHECK(m.accepted == 1);
}

TEST_CASE("pair submode halves the worker count, bike submode does not") {
  DemandTrace trace = two_station_trace(100, 100);
  auto cfg = explicit_cfg({1, 0}, Strategy::standard);
  cfg.relocator_count = 5;
  cfg.standard_submode = StandardSubmode::pair;
  CHECK(relocator_unit_count(cfg) == 2);
  cfg.standard_submode = StandardSubmode::bike;
  CHECK(relocator_unit_count(cfg) == 5);
  cfg.strategy = Strategy::stackable;
  CHECK(relocator_unit_count(cfg) == 5);
  cfg.strategy = Strategy::autonomous;
  CHECK(relocator_unit_count(cfg) == 0);

  cfg.strategy = Strategy::standard;
  cfg.standard_submode = StandardSubmode::pair;
  cfg.relocator_count = 1;  // one worker cannot form a pair team
  CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
}

TEST_CASE("effective train capacity per strategy") {
  SimulationConfig cfg;
  cfg.max_train = 8;
  cfg.strategy = Strategy::none;
  CHECK(effective_train_capacity(cfg) == 1);
  cfg.strategy = Strategy::standard;
  CHECK(effective_train_capacity(cfg) == 1);
  cfg.strategy = Strategy::stackable;
  cfg.capacity_mode = CapacityMode::service;
  CHECK(effective_train_capacity(cfg) == 8);
  cfg.capacity_mode = CapacityMode::train_car;
  CHECK(effective_train_capacity(cfg) == 7);
  cfg.strategy = Strategy::autonomous;
  CHECK(effective_train_capacity(cfg) == kUnboundedTrain);
}

TEST_CASE("initial placement policies") {
  DemandTrace trace = two_station_trace(100, 100);
  trace.stations.push_back({2, 2000.0, 0.0});
  trace.travel_times = TravelTimeMatrix(3, 100);

  SimulationConfig cfg;
  cfg.fleet_size = 7;
  cfg.placement = PlacementPolicy::uniform;
  CHECK(initial_placement(trace, cfg) == std::vector<std::int64_t>{3, 2, 2});

  cfg.placement = PlacementPolicy::proportional_to_outflow;
  trace.trips = {
      {0, 0, 1, 100, std::nullopt},
      {1, 2, 1, 200, std::nullopt},
      {2, 2, 0, 300, std::nullopt},
      {3, 2, 1, 400, std::nullopt},
      {4, 1, 0, 80000, std::nullopt},  // outside the first two hours
  };
  cfg.fleet_size = 4;
  CHECK(initial_placement(trace, cfg) == std::vector<std::int64_t>{1, 0, 3});

  // No early trips: fall back to uniform.
  trace.trips = {{0, 1, 0, 80000, std::nullopt}};
  cfg.fleet_size = 6;
  CHECK(initial_placement(trace, cfg) == std::vector<std::int64_t>{2, 2, 2});

  cfg.placement = PlacementPolicy::explicit_counts;
  cfg.explicit_placement = {4, 1, 1};
  cfg.fleet_size = 6;
  CHECK(initial_placement(trace, cfg) == std::vector<std::int64_t>{4, 1, 1});
}

TEST_CASE("config validation rejects inconsistent setups") {
  DemandTrace trace = two_station_trace(100, 100);
  SimulationConfig cfg;
  SUBCASE("negative fleet") {
    cfg.fleet_size = -1;
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
  }
  SUBCASE("zero interval") {
    cfg.relocation_interval_s = 0;
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
  }
  SUBCASE("stackable needs a real train") {
    cfg.strategy = Strategy::stackable;
    cfg.relocator_count = 1;
    cfg.max_train = 1;
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
  }
  SUBCASE("standard needs a unit") {
    cfg.strategy = Strategy::standard;
    cfg.relocator_count = 0;
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
  }
  SUBCASE("explicit placement must cover every station and sum up") {
    cfg.placement = PlacementPolicy::explicit_counts;
    cfg.fleet_size = 3;
    cfg.explicit_placement = {3};
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
    cfg.explicit_placement = {2, 2};
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
    cfg.explicit_placement = {-1, 4};
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
    cfg.explicit_placement = {2, 1};
    CHECK_NOTHROW(validate_config(trace, cfg));
  }
  SUBCASE("relocator start stations must exist") {
    cfg.relocator_start = {5};
    CHECK_THROWS_AS(validate_config(trace, cfg), ConfigError);
  }
  SUBCASE("invalid trace raises an input error") {
    DemandTrace bad = two_station_trace(100, 100);
    bad.trips = {{1, 0, 1, 500, std::nullopt}, {0, 0, 1, 100, std::nullopt}};
    CHECK_THROWS_AS(simulate(bad, SimulationConfig{}), InputError);
  }
}

TEST_CASE("name/parse round trips and unknown names") {
  for (auto s : {Strategy::none, Strategy::standard, Strategy::stackable, Strategy::autonomous})
    CHECK(parse_strategy(strategy_name(s)) == s);
  for (auto p : {PlacementPolicy::proportional_to_outflow, PlacementPolicy::uniform,
                 PlacementPolicy::explicit_counts})
    CHECK(parse_placement(placement_name(p)) == p);
  for (auto m : {CapacityMode::service, CapacityMode::train_car})
    CHECK(parse_capacity_mode(capacity_mode_name(m)) == m);
  for (auto m : {StandardSubmode::pair, StandardSubmode::bike})
    CHECK(parse_submode(submode_name(m)) == m);
  for (auto c : {ControlPolicy::zero, ControlPolicy::conservative_one})
    CHECK(parse_control_policy(control_policy_name(c)) == c);
  CHECK_THROWS_AS(parse_strategy("nope"), ConfigError);
  CHECK_THROWS_AS(parse_placement("nope"), ConfigError);
  CHECK_THROWS_AS(parse_capacity_mode("nope"), ConfigError);
  CHECK_THROWS_AS(parse_submode("nope"), ConfigError);
  CHECK_THROWS_AS(parse_control_policy("nope"), ConfigError);
}

TEST_CASE("simulation is bit-reproducible") {
  DemandTrace trace = commuter_trace(6, 600.0, 4711);
  SimulationConfig cfg;
  cfg.fleet_size = 40;
  cfg.strategy = Strategy::stackable;
  cfg.relocator_count = 4;
  cfg.max_train = 6;
  cfg.record_events = true;
  cfg.check_invariants = true;

  auto a = simulate(trace, cfg);
  auto b = simulate(trace, cfg);
  CHECK(metrics_to_json(a, cfg) == metrics_to_json(b, cfg));
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time_s == b.events[i].time_s);
    CHECK(a.events[i].kind == b.events[i].kind);
    CHECK(a.events[i].from == b.events[i].from);
    CHECK(a.events[i].to == b.events[i].to);
    CHECK(a.events[i].vehicles == b.events[i].vehicles);
    CHECK(a.events[i].actor == b.events[i].actor);
  }
}

TEST_CASE("no-relocation runs ignore the relocation knobs") {
  DemandTrace trace = commuter_trace(5, 400.0, 31);
  SimulationConfig base;
  base.fleet_size = 25;
  base.strategy = Strategy::none;

  auto reference = simulate(trace, base);
  for (std::int64_t interval : {300, 900, 1800}) {
    for (std::int64_t train : {2, 8}) {
      SimulationConfig cfg = base;
      cfg.relocation_interval_s = interval;
      cfg.max_train = train;
      auto m = simulate(trace, cfg);
      CHECK(m.accepted == reference.accepted);
      CHECK(m.rejected == reference.rejected);
      CHECK(m.rejections_per_station == reference.rejections_per_station);
      CHECK(m.executed_tasks == 0);
      CHECK(m.total_relocated_vehicles == 0);
    }
  }
}

TEST_CASE("conservation and non-negativity hold through every strategy") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    DemandTrace trace = commuter_trace(6, 500.0, seed);
    for (Strategy s :
         {Strategy::none, Strategy::standard, Strategy::stackable, Strategy::autonomous}) {
      SimulationConfig cfg;
      cfg.fleet_size = 30;
      cfg.strategy = s;
      cfg.relocator_count = 6;
      cfg.max_train = 5;
      cfg.check_invariants = true;  // throws std::logic_error on any drift
      SimulationMetrics m;
      CHECK_NOTHROW(m = simulate(trace, cfg));
      CHECK(m.accepted + m.rejected == static_cast<std::int64_t>(trace.trips.size()));
      std::int64_t station_rejects = 0;
      for (auto r : m.rejections_per_station) station_rejects += r;
      CHECK(station_rejects == m.rejected);
      if (s == Strategy::stackable) {
        for (const auto& [len, count] : m.train_length_hist) {
          CHECK(len >= 1);
          CHECK(len <= 4);  // train-car mode: 5 - 1
          CHECK(count > 0);
        }
      }
    }
  }
}

TEST_CASE("busy-series integral always equals total drive seconds") {
  DemandTrace trace = commuter_trace(6, 700.0, 99);
  SimulationConfig cfg;
  cfg.fleet_size = 35;
  cfg.strategy = Strategy::stackable;
  cfg.relocator_count = 3;
  cfg.max_train = 8;
  auto m = simulate(trace, cfg);
  CHECK(m.executed_tasks > 0);
  std::int64_t integral = 0;
  for (auto s : m.busy_seconds_per_min) integral += s;
  CHECK(integral == m.relocator_drive_seconds);
  for (std::size_t i = 0; i < m.busy_at_minute.size(); ++i) {
    CHECK(m.busy_at_minute[i] >= 0);
    CHECK(m.busy_at_minute[i] <= m.relocator_units);
    CHECK(m.busy_seconds_per_min[i] <= 60 * m.relocator_units);
  }
}
