#include "relosim/demand_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "relosim/errors.hpp"
#include "relosim/rng.hpp"

namespace relosim {

namespace {

std::uint64_t pair_stream_seed(std::uint64_t seed, StationId i, StationId j) {
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                      static_cast<std::uint32_t>(j);
  std::uint64_t state = key + 0x632BE59BD9B4E019ULL;
  return seed ^ splitmix64(state);
}

}  // namespace

std::vector<Station> deploy_stations(const GridDeploymentConfig& cfg) {
  if (!(cfg.cell_side_m > 0.0)) throw ConfigError("cell_side_m must be > 0");
  if (!(cfg.max_x_m > cfg.min_x_m) || !(cfg.max_y_m > cfg.min_y_m))
    throw ConfigError("degenerate bounding box");
  if (cfg.facilities.empty()) return {};

  const int nx = std::max(1, static_cast<int>(std::ceil((cfg.max_x_m - cfg.min_x_m) / cfg.cell_side_m)));
  const int ny = std::max(1, static_cast<int>(std::ceil((cfg.max_y_m - cfg.min_y_m) / cfg.cell_side_m)));

  // Ordered (row, col) -> occupied; ordering fixes station ids independently
  // of facility order.
  std::map<std::pair<int, int>, bool> occupied;
  for (const Facility& f : cfg.facilities) {
    if (f.x_m < cfg.min_x_m || f.x_m > cfg.max_x_m || f.y_m < cfg.min_y_m || f.y_m > cfg.max_y_m)
      throw ConfigError("facility outside the bounding box");
    int cx = std::min(static_cast<int>((f.x_m - cfg.min_x_m) / cfg.cell_side_m), nx - 1);
    int cy = std::min(static_cast<int>((f.y_m - cfg.min_y_m) / cfg.cell_side_m), ny - 1);
    occupied[{cy, cx}] = true;
  }

  std::vector<Station> stations;
  stations.reserve(occupied.size());
  for (const auto& [cell, _] : occupied) {
    Station s;
    s.id = static_cast<StationId>(stations.size());
    s.x_m = cfg.min_x_m + (cell.second + 0.5) * cfg.cell_side_m;
    s.y_m = cfg.min_y_m + (cell.first + 0.5) * cfg.cell_side_m;
    stations.push_back(s);
  }
  return stations;
}

DemandProfile DemandProfile::zero(int n, std::int64_t horizon_s, std::uint64_t seed) {
  DemandProfile p;
  p.station_count = n;
  p.base_rate_per_h.assign(static_cast<std::size_t>(n) * n, 0.0);
  p.horizon_s = horizon_s;
  p.seed = seed;
  return p;
}

DemandProfile commuter_profile(const std::vector<Station>& stations, std::int64_t horizon_s,
                               std::uint64_t seed, double daily_trips) {
  const int n = static_cast<int>(stations.size());
  if (n < 2) throw ConfigError("commuter profile needs at least 2 stations");
  if (!(daily_trips >= 0.0)) throw ConfigError("daily_trips must be >= 0");

  // Split on the median x coordinate: west half residential, east half
  // business (ties by id).
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return stations[a].x_m != stations[b].x_m ? stations[a].x_m < stations[b].x_m : a < b;
  });
  const int n_res = n / 2;
  std::vector<bool> business(n, false);
  for (int k = n_res; k < n; ++k) business[order[k]] = true;

  HourCurve morning{};
  HourCurve evening{};
  HourCurve offpeak = DemandProfile::flat_curve();
  const double bump[7] = {0.25, 1.0, 2.5, 4.0, 2.5, 1.0, 0.25};
  for (int h = 0; h < 7; ++h) {
    morning[5 + h] = bump[h];  // support [5, 12), peak hour 8
    evening[15 + h] = bump[h];  // support [15, 22), peak hour 18
  }
  const double sum_peak = std::accumulate(morning.begin(), morning.end(), 0.0);

  DemandProfile p = DemandProfile::zero(n, horizon_s, seed);
  p.curves = {offpeak, morning, evening};
  p.curve_index.assign(static_cast<std::size_t>(n) * n, 0);

  const double n_bus = static_cast<double>(n - n_res);
  const double commute_pairs = static_cast<double>(n_res) * n_bus;
  std::int64_t within = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && business[i] == business[j]) within++;

  const double morning_base = 0.45 * daily_trips / (commute_pairs * sum_peak);
  const double evening_base = 0.45 * daily_trips / (commute_pairs * sum_peak);
  const double offpeak_base = within > 0 ? 0.10 * daily_trips / (static_cast<double>(within) * 24.0) : 0.0;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      if (!business[i] && business[j]) {
        p.base_rate_per_h[idx] = morning_base;
        p.curve_index[idx] = 1;
      } else if (business[i] && !business[j]) {
        p.base_rate_per_h[idx] = evening_base;
        p.curve_index[idx] = 2;
      } else {
        p.base_rate_per_h[idx] = offpeak_base;
        p.curve_index[idx] = 0;
      }
    }
  }
  return p;
}

std::vector<TripRequest> synthesize_trips(const DemandProfile& profile, std::uint64_t seed) {
  const int n = profile.station_count;
  if (n < 0 || profile.base_rate_per_h.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("demand profile rate matrix does not match station count");
  if (!profile.curve_index.empty() &&
      profile.curve_index.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("demand profile curve index does not match station count");
  for (double r : profile.base_rate_per_h)
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("negative or non-finite base rate");
  for (const HourCurve& c : profile.curves)
    for (double m : c)
      if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("negative or non-finite hour multiplier");
  if (!profile.curve_index.empty())
    for (int idx : profile.curve_index)
      if (idx < 0 || idx >= static_cast<int>(profile.curves.size()))
        throw ConfigError("curve index out of range");

  struct Raw {
    std::int64_t time_s;
    StationId origin, destination;
    int order;  // within-pair arrival order, for the sort tie-break
  };
  std::vector<Raw> raw;

  // One independent thinned Poisson stream per OD pair so the output for a
  // pair depends only on (seed, i, j, rate, curve).
  for (StationId i = 0; i < n; ++i) {
    for (StationId j = 0; j < n; ++j) {
      const double base = profile.rate(i, j);
      if (base <= 0.0) continue;
      const HourCurve& curve = profile.curve_of(i, j);
      const double max_mult = *std::max_element(curve.begin(), curve.end());
      if (max_mult <= 0.0) continue;
      const double lambda_max_per_s = base * max_mult / 3600.0;

      Xoshiro256pp rng(pair_stream_seed(seed, i, j));
      double t = 0.0;
      int order = 0;
      for (;;) {
        t += rng.next_exponential(lambda_max_per_s);
        if (t >= static_cast<double>(profile.horizon_s)) break;
        const double u = rng.next_double();
        const int hour = static_cast<int>(static_cast<std::int64_t>(t / 3600.0) % 24);
        if (u * max_mult < curve[hour])
          raw.push_back({static_cast<std::int64_t>(t), i, j, order++});
      }
    }
  }

  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    if (a.origin != b.origin) return a.origin < b.origin;
    if (a.destination != b.destination) return a.destination < b.destination;
    return a.order < b.order;
  });

  std::vector<TripRequest> trips;
  trips.reserve(raw.size());
  for (const Raw& r : raw) {
    TripRequest t;
    t.id = static_cast<std::int64_t>(trips.size());
    t.origin = r.origin;
    t.destination = r.destination;
    t.request_time_s = r.time_s;
    trips.push_back(t);
  }
  return trips;
}

TravelTimeMatrix derive_travel_times(const std::vector<Station>& stations, double speed_mps) {
  if (!(speed_mps > 0.0)) throw ConfigError("speed must be > 0");
  const int n = static_cast<int>(stations.size());
  TravelTimeMatrix times(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = stations[i].x_m - stations[j].x_m;
      const double dy = stations[i].y_m - stations[j].y_m;
      times.at(i, j) = std::llround(std::hypot(dx, dy) / speed_mps);
    }
  }
  return times;
}

DemandTrace synthesize_demand(const DemandProfile& profile, const std::vector<Station>& stations,
                              std::uint64_t seed, const TravelTimeMatrix* times,
                              double speed_mps) {
  if (static_cast<int>(stations.size()) != profile.station_count)
    throw ConfigError("profile station count does not match station list");
  DemandTrace trace;
  trace.stations = stations;
  trace.travel_times = times ? *times : derive_travel_times(stations, speed_mps);
  trace.trips = synthesize_trips(profile, seed);
  trace.horizon_s = profile.horizon_s;
  return trace;
}

}  // namespace relosim
