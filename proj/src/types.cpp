#include "relosim/types.hpp"

#include <cmath>

namespace relosim {

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unknown_station: return "unknown_station";
    case ViolationKind::out_of_horizon: return "out_of_horizon";
    case ViolationKind::negative_travel_time: return "negative_travel_time";
    case ViolationKind::unsorted_trips: return "unsorted_trips";
    case ViolationKind::bad_station: return "bad_station";
    case ViolationKind::bad_travel_matrix: return "bad_travel_matrix";
  }
  return "unknown";
}

std::vector<ScenarioViolation> validate_scenario(const DemandTrace& trace) {
  std::vector<ScenarioViolation> report;
  const int n = trace.station_count();

  for (int i = 0; i < n; ++i) {
    const Station& s = trace.stations[i];
    if (s.id != i)
      report.push_back({ViolationKind::bad_station, -1,
                        "station ids must be dense 0..N-1; index " + std::to_string(i) +
                            " has id " + std::to_string(s.id)});
    if (!std::isfinite(s.x_m) || !std::isfinite(s.y_m))
      report.push_back({ViolationKind::bad_station, -1,
                        "non-finite coordinates at station " + std::to_string(s.id)});
  }

  if (trace.travel_times.size() != n) {
    report.push_back({ViolationKind::bad_travel_matrix, -1,
                      "travel-time matrix is " + std::to_string(trace.travel_times.size()) +
                          "x" + std::to_string(trace.travel_times.size()) + " but there are " +
                          std::to_string(n) + " stations"});
  } else {
    for (int i = 0; i < n; ++i) {
      if (trace.travel_times.at(i, i) != 0)
        report.push_back({ViolationKind::bad_travel_matrix, -1,
                          "nonzero diagonal at station " + std::to_string(i)});
      for (int j = 0; j < n; ++j)
        if (trace.travel_times.at(i, j) < 0)
          report.push_back({ViolationKind::bad_travel_matrix, -1,
                            "negative travel time " + std::to_string(i) + "->" +
                                std::to_string(j)});
    }
  }

  const TripRequest* prev = nullptr;
  for (const TripRequest& trip : trace.trips) {
    const std::string tag = "trip " + std::to_string(trip.id);
    if (trip.origin < 0 || trip.origin >= n)
      report.push_back({ViolationKind::unknown_station, trip.id,
                        tag + ": origin " + std::to_string(trip.origin)});
    if (trip.destination < 0 || trip.destination >= n)
      report.push_back({ViolationKind::unknown_station, trip.id,
                        tag + ": destination " + std::to_string(trip.destination)});
    if (trip.request_time_s < 0 || trip.request_time_s >= trace.horizon_s)
      report.push_back({ViolationKind::out_of_horizon, trip.id,
                        tag + ": request_time " + std::to_string(trip.request_time_s) +
                            " outside [0, " + std::to_string(trace.horizon_s) + ")"});
    if (trip.travel_time_s && *trip.travel_time_s < 0)
      report.push_back({ViolationKind::negative_travel_time, trip.id,
                        tag + ": travel_time " + std::to_string(*trip.travel_time_s)});
    if (prev && (prev->request_time_s > trip.request_time_s ||
                 (prev->request_time_s == trip.request_time_s && prev->id > trip.id)))
      report.push_back({ViolationKind::unsorted_trips, trip.id,
                        tag + " out of (request_time, id) order"});
    prev = &trip;
  }
  return report;
}

std::vector<std::int64_t> station_daily_unbalance(const DemandTrace& trace) {
  std::vector<std::int64_t> unbalance(trace.station_count(), 0);
  for (const TripRequest& trip : trace.trips) {
    unbalance[trip.destination] += 1;
    unbalance[trip.origin] -= 1;
  }
  return unbalance;
}

}  // namespace relosim
