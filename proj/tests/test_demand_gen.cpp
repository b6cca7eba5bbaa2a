#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "relosim/demand_gen.hpp"
#include "relosim/errors.hpp"
#include "relosim/types.hpp"

using namespace relosim;

namespace {

GridDeploymentConfig box_2x2() {
  GridDeploymentConfig cfg;
  cfg.cell_side_m = 1000.0;
  cfg.min_x_m = 0.0;
  cfg.min_y_m = 0.0;
  cfg.max_x_m = 2000.0;
  cfg.max_y_m = 2000.0;
  return cfg;
}

std::vector<Station> line_stations(int n, double spacing_m = 1000.0) {
  std::vector<Station> s;
  for (int i = 0; i < n; ++i) s.push_back({i, i * spacing_m, 0.0});
  return s;
}

}  // namespace

TEST_CASE("deploy_stations puts one station per occupied cell at its centroid") {
  auto cfg = box_2x2();
  cfg.facilities = {{100, 100}, {150, 180}, {1500, 1900}};
  auto stations = deploy_stations(cfg);
  REQUIRE(stations.size() == 2);  // two facilities share cell (0,0)
  CHECK(stations[0].id == 0);
  CHECK(stations[0].x_m == doctest::Approx(500.0));
  CHECK(stations[0].y_m == doctest::Approx(500.0));
  CHECK(stations[1].x_m == doctest::Approx(1500.0));
  CHECK(stations[1].y_m == doctest::Approx(1500.0));
}

TEST_CASE("deploy_stations ids are row-major and facility-order independent") {
  auto cfg = box_2x2();
  cfg.facilities = {{1500, 100}, {100, 1500}, {100, 100}};
  auto a = deploy_stations(cfg);
  std::reverse(cfg.facilities.begin(), cfg.facilities.end());
  auto b = deploy_stations(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].x_m == b[i].x_m);
    CHECK(a[i].y_m == b[i].y_m);
  }
  // Row-major: (row 0, col 0) then (row 0, col 1) then (row 1, col 0).
  CHECK(a[0].y_m == doctest::Approx(500.0));
  CHECK(a[0].x_m == doctest::Approx(500.0));
  CHECK(a[1].y_m == doctest::Approx(500.0));
  CHECK(a[1].x_m == doctest::Approx(1500.0));
  CHECK(a[2].y_m == doctest::Approx(1500.0));
  CHECK(a[2].x_m == doctest::Approx(500.0));
}

TEST_CASE("deploy_stations clamps boundary facilities into the last cell") {
  auto cfg = box_2x2();
  cfg.facilities = {{2000, 2000}};  // exactly on the max corner
  auto stations = deploy_stations(cfg);
  REQUIRE(stations.size() == 1);
  CHECK(stations[0].x_m == doctest::Approx(1500.0));
  CHECK(stations[0].y_m == doctest::Approx(1500.0));
}

TEST_CASE("deploy_stations rejects bad configurations") {
  auto cfg = box_2x2();
  cfg.facilities = {{100, 100}};
  SUBCASE("zero cell side") {
    cfg.cell_side_m = 0.0;
    CHECK_THROWS_AS(deploy_stations(cfg), ConfigError);
  }
  SUBCASE("degenerate box") {
    cfg.max_x_m = cfg.min_x_m;
    CHECK_THROWS_AS(deploy_stations(cfg), ConfigError);
  }
  SUBCASE("facility outside the box") {
    cfg.facilities = {{-5, 100}};
    CHECK_THROWS_AS(deploy_stations(cfg), ConfigError);
  }
  SUBCASE("no facilities means no stations") {
    cfg.facilities.clear();
    CHECK(deploy_stations(cfg).empty());
  }
}

TEST_CASE("homogeneous poisson stream hits the expected mean count") {
  // One pair, flat curve, 2.5 trips/h over 24 h -> expectation 60.
  DemandProfile p = DemandProfile::zero(2, 86400, 0);
  p.rate(0, 1) = 2.5;

  const int kSeeds = 100;
  double total = 0.0;
  for (int s = 0; s < kSeeds; ++s) total += static_cast<double>(synthesize_trips(p, 1000 + s).size());
  const double mean = total / kSeeds;
  // Poisson(60): sd of the mean over 100 seeds is sqrt(60/100) ~ 0.775.
  CHECK(std::fabs(mean - 60.0) < 3.0 * std::sqrt(60.0 / kSeeds));
}

TEST_CASE("poisson count variance is in the right ballpark") {
  DemandProfile p = DemandProfile::zero(2, 86400, 0);
  p.rate(0, 1) = 2.5;
  const int kSeeds = 200;
  std::vector<double> counts;
  for (int s = 0; s < kSeeds; ++s) counts.push_back(static_cast<double>(synthesize_trips(p, 77 + s).size()));
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= kSeeds;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= kSeeds - 1;
  // Poisson: variance == mean == 60. Accept a generous band.
  CHECK(var > 30.0);
  CHECK(var < 100.0);
}

TEST_CASE("hour gating: zero-rate hours produce no trips") {
  DemandProfile p = DemandProfile::zero(2, 86400, 0);
  p.rate(0, 1) = 40.0;
  HourCurve gate{};
  gate[9] = 1.0;  // only 09:00-10:00 active
  p.curves = {gate};
  auto trips = synthesize_trips(p, 5);
  CHECK(!trips.empty());
  for (const auto& t : trips) {
    CHECK(t.request_time_s >= 9 * 3600);
    CHECK(t.request_time_s < 10 * 3600);
  }
}

TEST_CASE("trips are sorted with sequential ids and no explicit travel time") {
  DemandProfile p = DemandProfile::zero(3, 86400, 0);
  p.rate(0, 1) = 3.0;
  p.rate(1, 2) = 3.0;
  p.rate(2, 0) = 3.0;
  auto trips = synthesize_trips(p, 99);
  REQUIRE(!trips.empty());
  for (std::size_t k = 0; k < trips.size(); ++k) {
    CHECK(trips[k].id == static_cast<std::int64_t>(k));
    CHECK_FALSE(trips[k].travel_time_s.has_value());
    if (k > 0) CHECK(trips[k - 1].request_time_s <= trips[k].request_time_s);
  }
}

TEST_CASE("same seed reproduces identical trips; different seed does not") {
  DemandProfile p = DemandProfile::zero(3, 86400, 0);
  p.rate(0, 1) = 5.0;
  p.rate(2, 1) = 1.5;
  auto a = synthesize_trips(p, 4242);
  auto b = synthesize_trips(p, 4242);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].id == b[k].id);
    CHECK(a[k].origin == b[k].origin);
    CHECK(a[k].destination == b[k].destination);
    CHECK(a[k].request_time_s == b[k].request_time_s);
  }
  auto c = synthesize_trips(p, 4243);
  bool identical = a.size() == c.size();
  if (identical)
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].request_time_s != c[k].request_time_s || a[k].origin != c[k].origin)
        identical = false;
  CHECK_FALSE(identical);
}

TEST_CASE("per-pair streams: adding a pair leaves existing pairs untouched") {
  DemandProfile p1 = DemandProfile::zero(3, 86400, 0);
  p1.rate(0, 1) = 4.0;
  DemandProfile p2 = p1;
  p2.rate(1, 2) = 7.0;

  auto extract = [](const std::vector<TripRequest>& trips, StationId o, StationId d) {
    std::vector<std::int64_t> times;
    for (const auto& t : trips)
      if (t.origin == o && t.destination == d) times.push_back(t.request_time_s);
    return times;
  };
  auto a = extract(synthesize_trips(p1, 7), 0, 1);
  auto b = extract(synthesize_trips(p2, 7), 0, 1);
  CHECK(a == b);
}

TEST_CASE("commuter profile pushes morning flow toward business stations") {
  auto stations = line_stations(4);
  auto p = commuter_profile(stations, 86400, 0, 2000.0);
  REQUIRE(p.curves.size() == 3);

  // Stations 0,1 residential; 2,3 business (median-x split).
  // Morning curve peaks at hour 8, evening at hour 18.
  CHECK(p.curves[1][8] == doctest::Approx(4.0));
  CHECK(p.curves[1][18] == doctest::Approx(0.0));
  CHECK(p.curves[2][18] == doctest::Approx(4.0));
  CHECK(p.curves[2][8] == doctest::Approx(0.0));
  CHECK(p.curve_index[0 * 4 + 2] == 1);  // res -> bus rides the morning curve
  CHECK(p.curve_index[2 * 4 + 0] == 2);  // bus -> res rides the evening curve
  CHECK(p.curve_index[0 * 4 + 1] == 0);  // within-class is off-peak
  CHECK(p.rate(0, 0) == 0.0);

  // Expected daily volume ~ daily_trips: 45% + 45% + 10%.
  double expected = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const HourCurve& c = p.curve_of(i, j);
      double day = 0.0;
      for (double m : c) day += m;
      expected += p.rate(i, j) * day;
    }
  CHECK(expected == doctest::Approx(2000.0).epsilon(1e-9));
}

TEST_CASE("commuter trips lean res->bus in the morning and back in the evening") {
  auto stations = line_stations(6);
  auto p = commuter_profile(stations, 86400, 0, 3000.0);
  auto trips = synthesize_trips(p, 12345);
  REQUIRE(trips.size() > 500);

  auto is_business = [&](StationId s) { return s >= 3; };
  std::int64_t morning_to_bus = 0, morning_to_res = 0;
  std::int64_t evening_to_bus = 0, evening_to_res = 0;
  for (const auto& t : trips) {
    const int hour = static_cast<int>(t.request_time_s / 3600);
    const bool cross = is_business(t.origin) != is_business(t.destination);
    if (!cross) continue;
    if (hour >= 5 && hour < 12) (is_business(t.destination) ? morning_to_bus : morning_to_res)++;
    if (hour >= 15 && hour < 22) (is_business(t.destination) ? evening_to_bus : evening_to_res)++;
  }
  CHECK(morning_to_bus > 5 * std::max<std::int64_t>(morning_to_res, 1));
  CHECK(evening_to_res > 5 * std::max<std::int64_t>(evening_to_bus, 1));
}

TEST_CASE("commuter profile rejects degenerate inputs") {
  CHECK_THROWS_AS(commuter_profile(line_stations(1), 86400, 0, 100.0), ConfigError);
  CHECK_THROWS_AS(commuter_profile(line_stations(4), 86400, 0, -1.0), ConfigError);
}

TEST_CASE("synthesize_trips validates the profile") {
  DemandProfile p = DemandProfile::zero(2, 86400, 0);
  SUBCASE("negative rate") {
    p.rate(0, 1) = -1.0;
    CHECK_THROWS_AS(synthesize_trips(p, 0), ConfigError);
  }
  SUBCASE("rate matrix size mismatch") {
    p.base_rate_per_h.pop_back();
    CHECK_THROWS_AS(synthesize_trips(p, 0), ConfigError);
  }
  SUBCASE("curve index out of range") {
    p.curve_index.assign(4, 3);
    CHECK_THROWS_AS(synthesize_trips(p, 0), ConfigError);
  }
  SUBCASE("negative hour multiplier") {
    p.curves[0][4] = -0.5;
    CHECK_THROWS_AS(synthesize_trips(p, 0), ConfigError);
  }
}

TEST_CASE("derive_travel_times rounds euclid/speed to whole seconds") {
  auto stations = line_stations(3, 1000.0);
  auto times = derive_travel_times(stations, 10.0);
  CHECK(times.at(0, 1) == 100);
  CHECK(times.at(0, 2) == 200);
  CHECK(times.at(2, 0) == 200);
  CHECK(times.at(1, 1) == 0);

  std::vector<Station> diag = {{0, 0.0, 0.0}, {1, 300.0, 400.0}};
  CHECK(derive_travel_times(diag, 10.0).at(0, 1) == 50);
  CHECK_THROWS_AS(derive_travel_times(diag, 0.0), ConfigError);
}

TEST_CASE("synthesize_demand assembles a valid trace") {
  auto stations = line_stations(4);
  auto p = commuter_profile(stations, 86400, 0, 500.0);
  auto trace = synthesize_demand(p, stations, 31337);
  CHECK(trace.station_count() == 4);
  CHECK(trace.horizon_s == 86400);
  CHECK(validate_scenario(trace).empty());
  CHECK(!trace.trips.empty());

  TravelTimeMatrix fixed(4, 60);
  auto trace2 = synthesize_demand(p, stations, 31337, &fixed);
  CHECK(trace2.travel_times.at(0, 3) == 60);
  CHECK(trace2.trips.size() == trace.trips.size());

  auto wrong = line_stations(3);
  CHECK_THROWS_AS(synthesize_demand(p, wrong, 31337), ConfigError);
}
