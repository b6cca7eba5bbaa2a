// Readers/writers for the flat file formats:
//   stations:     station_id,x_m,y_m                      (with header)
//   demand:       trip_id,origin,destination,request_time_s[,travel_time_s]
//   travel times: dense N x N matrix, row i = from-station i, seconds, no header
#pragma once

#include <string>
#include <vector>

#include "relosim/types.hpp"

namespace relosim {

std::vector<Station> load_stations(const std::string& path);
void save_stations(const std::vector<Station>& stations, const std::string& path);

// Loads trips only; resorts by (request_time, id).
std::vector<TripRequest> load_trips(const std::string& path);
void save_trips(const std::vector<TripRequest>& trips, const std::string& path);

TravelTimeMatrix load_travel_times(const std::string& path);
void save_travel_times(const TravelTimeMatrix& times, const std::string& path);

}  // namespace relosim
