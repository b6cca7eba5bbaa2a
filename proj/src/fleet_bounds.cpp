#include "relosim/fleet_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "relosim/errors.hpp"
#include "relosim/min_cost_flow.hpp"

namespace relosim {

RateMatrix estimate_rates(const DemandTrace& trace) {
  if (trace.horizon_s <= 0) throw InputError("rate estimation needs a positive horizon");
  const int n = trace.station_count();
  RateMatrix rates(n);
  const double hours = static_cast<double>(trace.horizon_s) / 3600.0;
  for (const TripRequest& t : trace.trips) {
    if (t.origin == t.destination) continue;
    rates.at(t.origin, t.destination) += 1.0 / hours;
  }
  return rates;
}

NoRelocationSizing min_fleet_no_relocation(const DemandTrace& trace) {
  const int n = trace.station_count();
  NoRelocationSizing sizing;
  sizing.initial_vehicles.assign(n, 0);

  // Per station: pickup events at request_time, dropoff events at
  // request_time + travel_time. Kind 0 sorts dropoffs before pickups at
  // equal times.
  struct Ev {
    std::int64_t time_s;
    int kind;  // 0 dropoff, 1 pickup
  };
  std::vector<std::vector<Ev>> events(n);
  for (const TripRequest& t : trace.trips) {
    events[t.origin].push_back({t.request_time_s, 1});
    events[t.destination].push_back({t.request_time_s + trace.trip_travel_time(t), 0});
  }

  for (int i = 0; i < n; ++i) {
    auto& evs = events[i];
    std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
      return a.time_s != b.time_s ? a.time_s < b.time_s : a.kind < b.kind;
    });
    std::int64_t deficit = 0, worst = 0;
    for (const Ev& e : evs) {
      deficit += e.kind == 1 ? 1 : -1;
      worst = std::max(worst, deficit);
    }
    sizing.initial_vehicles[i] = worst;
    sizing.total += worst;
  }
  return sizing;
}

FluidSolution solve_fluid(const RateMatrix& rates, const TravelTimeMatrix& times) {
  const int n = rates.n;
  if (times.size() != n) throw InputError("rate matrix and travel-time matrix sizes differ");
  if (rates.per_h.size() != static_cast<std::size_t>(n) * n)
    throw InputError("malformed rate matrix");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = rates.at(i, j);
      if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("negative or non-finite trip rate");
      if (i == j && r != 0.0) throw InputError("rate matrix diagonal must be zero");
    }

  // Node supply = net rate at which demand strands vehicles at i; the flow
  // ships that surplus back out.
  std::vector<double> supply(n, 0.0);
  std::vector<double> cost_h(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      supply[i] += rates.at(j, i) - rates.at(i, j);
      cost_h[static_cast<std::size_t>(i) * n + j] = static_cast<double>(times.at(i, j)) / 3600.0;
    }
  }

  MinCostFlowResult flow = solve_min_cost_flow(n, cost_h, supply);
  if (!flow.feasible) throw InputError("trip rates are not balanced");

  FluidSolution sol;
  sol.alpha = RateMatrix(n);
  sol.inbound_per_h.assign(n, 0.0);
  sol.outbound_per_h.assign(n, 0.0);
  sol.certificate = flow.max_dual_violation;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double a = flow.flow[static_cast<std::size_t>(i) * n + j];
      const double t_h = cost_h[static_cast<std::size_t>(i) * n + j];
      sol.alpha.at(i, j) = a;
      sol.objective_veh += a * t_h;
      sol.min_fleet += (rates.at(i, j) + a) * t_h;
      sol.outbound_per_h[i] += a;
      sol.inbound_per_h[j] += a;
    }
  }
  sol.min_fleet_ceil = static_cast<std::int64_t>(
      std::ceil(sol.min_fleet - 1e-9 * std::max(1.0, std::abs(sol.min_fleet))));
  return sol;
}

}  // namespace relosim
