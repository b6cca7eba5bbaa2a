// Synthetic demand: grid station deployment, OD Poisson-process trip
// synthesis with hour-of-day structure, and euclidean travel-time derivation.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "relosim/types.hpp"

namespace relosim {

inline constexpr double kDefaultSpeedMps = 8.33;  // ~30 km/h urban average

struct Facility {
  double x_m = 0.0;
  double y_m = 0.0;
};

struct GridDeploymentConfig {
  double cell_side_m = 1000.0;
  double min_x_m = 0.0, min_y_m = 0.0;
  double max_x_m = 0.0, max_y_m = 0.0;
  std::vector<Facility> facilities;
};

// One station at the centroid of every grid cell holding at least one
// facility. Ids are assigned in (row, column) cell order, so the result does
// not depend on facility list order.
std::vector<Station> deploy_stations(const GridDeploymentConfig& cfg);

using HourCurve = std::array<double, 24>;

// Time-inhomogeneous Poisson demand: intensity of OD pair (i, j) at time t is
// base_rate(i, j) * curve[hour_of_day(t)], in trips/hour. Each pair selects
// one curve from a shared set (index 0 by default), which is how directional
// commuter patterns are expressed.
struct DemandProfile {
  int station_count = 0;
  std::vector<double> base_rate_per_h;  // N*N row-major, diagonal usually 0
  std::vector<HourCurve> curves = {flat_curve()};
  std::vector<int> curve_index;  // N*N row-major; empty means all zero
  std::int64_t horizon_s = 86400;
  std::uint64_t seed = 0;

  static HourCurve flat_curve() {
    HourCurve c{};
    c.fill(1.0);
    return c;
  }

  double rate(StationId i, StationId j) const {
    return base_rate_per_h[static_cast<std::size_t>(i) * station_count + j];
  }
  double& rate(StationId i, StationId j) {
    return base_rate_per_h[static_cast<std::size_t>(i) * station_count + j];
  }
  const HourCurve& curve_of(StationId i, StationId j) const {
    if (curve_index.empty()) return curves[0];
    return curves[curve_index[static_cast<std::size_t>(i) * station_count + j]];
  }

  static DemandProfile zero(int n, std::int64_t horizon_s, std::uint64_t seed);
};

// Commuter preset: stations below the median x coordinate are "residential",
// the rest "business". Morning flow residential->business peaks at hour 8,
// the reverse flow peaks at hour 18, plus a small flat within-class
// background. Base rates are scaled so a 24 h horizon yields about
// daily_trips trips in expectation.
DemandProfile commuter_profile(const std::vector<Station>& stations, std::int64_t horizon_s,
                               std::uint64_t seed, double daily_trips);

// Exact thinning sampler; pure function of (profile, seed). Trips come back
// sorted by (request_time, id) with ids 0..n-1 and no explicit travel time.
std::vector<TripRequest> synthesize_trips(const DemandProfile& profile, std::uint64_t seed);

// Euclidean distance / speed, rounded to whole seconds.
TravelTimeMatrix derive_travel_times(const std::vector<Station>& stations, double speed_mps);

// Full trace assembly: synthesized trips + stations + travel times (derived
// at speed_mps when no matrix is supplied).
DemandTrace synthesize_demand(const DemandProfile& profile, const std::vector<Station>& stations,
                              std::uint64_t seed, const TravelTimeMatrix* times = nullptr,
                              double speed_mps = kDefaultSpeedMps);

}  // namespace relosim
