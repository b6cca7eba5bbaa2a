// Analytical fleet sizing: the prefix-max no-relocation minimum fleet and
// the fluid-model optimal rebalancing bound (min-cost flow on trip rates).
#pragma once

#include <cstdint>
#include <vector>

#include "relosim/types.hpp"

namespace relosim {

struct RateMatrix {
  int n = 0;
  std::vector<double> per_h;  // row-major, trips/hour, diagonal 0

  RateMatrix() = default;
  explicit RateMatrix(int count) : n(count), per_h(static_cast<std::size_t>(count) * count, 0.0) {}
  double& at(int i, int j) { return per_h[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return per_h[static_cast<std::size_t>(i) * n + j]; }
};

struct NoRelocationSizing {
  std::vector<std::int64_t> initial_vehicles;  // v_i(0)
  std::int64_t total = 0;
};

struct FluidSolution {
  RateMatrix alpha;                  // optimal rebalancing flows, veh/hour
  double objective_veh = 0.0;        // sum T_h(i,j) * alpha(i,j)
  double min_fleet = 0.0;            // sum (lambda + alpha) * T_h
  std::int64_t min_fleet_ceil = 0;   // provisioning integer
  std::vector<double> inbound_per_h;   // per-station relocation arrivals
  std::vector<double> outbound_per_h;  // per-station relocation departures
  double certificate = 0.0;            // max dual (reduced-cost) violation
};

// Empirical trip rates: count of i->j trips divided by horizon in hours.
// Trips with origin == destination are ignored (they shift no vehicles).
RateMatrix estimate_rates(const DemandTrace& trace);

// Smallest per-station midnight stock such that availability never goes
// negative when every request is served and no relocation happens. A dropoff
// completes at request_time + travel_time; same-time dropoffs count before
// pickups, matching the simulator's event order.
NoRelocationSizing min_fleet_no_relocation(const DemandTrace& trace);

// Minimize rebalancing vehicle-hours: min sum T_h(i,j)*alpha(i,j) subject to
//   forall i: sum_j (alpha(i,j) - alpha(j,i)) = sum_j (lambda(j,i) - lambda(i,j))
// and alpha >= 0. Stations where trips pile up ship vehicles back to stations
// that drain. min_fleet = sum (lambda + alpha) * T_h is the steady-state
// number of vehicles in motion, a fleet-size lower bound.
FluidSolution solve_fluid(const RateMatrix& rates, const TravelTimeMatrix& times);

}  // namespace relosim
