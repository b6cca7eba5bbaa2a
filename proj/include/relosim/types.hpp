// Shared vocabulary: stations, travel times, trip requests, demand traces.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace relosim {

// Dense station index in [0, N).
using StationId = std::int32_t;

struct Station {
  StationId id = 0;
  double x_m = 0.0;  // planar scenario-local frame, meters
  double y_m = 0.0;
};

// N x N vehicle travel times in whole seconds. Diagonal is 0; symmetry is not
// assumed.
class TravelTimeMatrix {
 public:
  TravelTimeMatrix() = default;
  explicit TravelTimeMatrix(int n, std::int64_t fill = 0)
      : n_(n), values_(static_cast<std::size_t>(n) * n, fill) {
    for (int i = 0; i < n; ++i) at(i, i) = 0;
  }

  int size() const { return n_; }
  std::int64_t at(StationId from, StationId to) const {
    return values_[static_cast<std::size_t>(from) * n_ + to];
  }
  std::int64_t& at(StationId from, StationId to) {
    return values_[static_cast<std::size_t>(from) * n_ + to];
  }

 private:
  int n_ = 0;
  std::vector<std::int64_t> values_;
};

struct TripRequest {
  std::int64_t id = 0;  // sequence number, unique within a trace
  StationId origin = 0;
  StationId destination = 0;
  std::int64_t request_time_s = 0;
  // Unset means "look up in the travel-time matrix".
  std::optional<std::int64_t> travel_time_s;
};

struct DemandTrace {
  std::vector<Station> stations;
  TravelTimeMatrix travel_times;
  std::vector<TripRequest> trips;  // sorted by (request_time, id)
  std::int64_t horizon_s = 0;

  int station_count() const { return static_cast<int>(stations.size()); }
  std::int64_t trip_travel_time(const TripRequest& trip) const {
    return trip.travel_time_s ? *trip.travel_time_s
                              : travel_times.at(trip.origin, trip.destination);
  }
};

enum class ViolationKind {
  unknown_station,
  out_of_horizon,
  negative_travel_time,
  unsorted_trips,
  bad_station,
  bad_travel_matrix,
};

struct ScenarioViolation {
  ViolationKind kind;
  std::int64_t trip_id;  // -1 when not trip-related
  std::string detail;
};

const char* violation_kind_name(ViolationKind kind);

// Report-style validation: returns every invariant violation found; empty
// iff the trace is well formed.
std::vector<ScenarioViolation> validate_scenario(const DemandTrace& trace);

// Per-station (inflow - outflow) over the whole trace. Sums to zero.
std::vector<std::int64_t> station_daily_unbalance(const DemandTrace& trace);

}  // namespace relosim
