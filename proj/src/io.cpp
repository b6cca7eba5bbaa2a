#include "relosim/io.hpp"

#include <algorithm>
#include <fstream>

#include "relosim/csv.hpp"
#include "relosim/errors.hpp"

namespace relosim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  return out;
}

bool has_header(const std::vector<std::string>& fields) {
  // Header rows start with a non-numeric field.
  if (fields.empty() || fields[0].empty()) return false;
  char c = fields[0][0];
  return !(c == '-' || c == '+' || (c >= '0' && c <= '9'));
}

}  // namespace

std::vector<Station> load_stations(const std::string& path) {
  auto lines = csv::read_lines(path);
  std::vector<Station> stations;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    auto fields = csv::split(lines[row]);
    if (row == 0 && has_header(fields)) continue;
    if (fields.size() != 3)
      throw InputError(path + ": station rows need 3 fields, line " + std::to_string(row + 1));
    const std::string ctx = path + " line " + std::to_string(row + 1);
    Station s;
    s.id = static_cast<StationId>(csv::parse_i64(fields[0], ctx));
    s.x_m = csv::parse_double(fields[1], ctx);
    s.y_m = csv::parse_double(fields[2], ctx);
    stations.push_back(s);
  }
  std::sort(stations.begin(), stations.end(),
            [](const Station& a, const Station& b) { return a.id < b.id; });
  return stations;
}

void save_stations(const std::vector<Station>& stations, const std::string& path) {
  auto out = open_out(path);
  out << "station_id,x_m,y_m\n";
  for (const Station& s : stations)
    out << s.id << ',' << csv::format_double(s.x_m) << ',' << csv::format_double(s.y_m) << '\n';
}

std::vector<TripRequest> load_trips(const std::string& path) {
  auto lines = csv::read_lines(path);
  std::vector<TripRequest> trips;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    auto fields = csv::split(lines[row]);
    if (row == 0 && has_header(fields)) continue;
    if (fields.size() != 4 && fields.size() != 5)
      throw InputError(path + ": trip rows need 4 or 5 fields, line " + std::to_string(row + 1));
    const std::string ctx = path + " line " + std::to_string(row + 1);
    TripRequest t;
    t.id = csv::parse_i64(fields[0], ctx);
    t.origin = static_cast<StationId>(csv::parse_i64(fields[1], ctx));
    t.destination = static_cast<StationId>(csv::parse_i64(fields[2], ctx));
    t.request_time_s = csv::parse_i64(fields[3], ctx);
    if (fields.size() == 5 && !fields[4].empty())
      t.travel_time_s = csv::parse_i64(fields[4], ctx);
    trips.push_back(t);
  }
  std::sort(trips.begin(), trips.end(), [](const TripRequest& a, const TripRequest& b) {
    return a.request_time_s != b.request_time_s ? a.request_time_s < b.request_time_s
                                                : a.id < b.id;
  });
  return trips;
}

void save_trips(const std::vector<TripRequest>& trips, const std::string& path) {
  auto out = open_out(path);
  out << "trip_id,origin,destination,request_time_s,travel_time_s\n";
  for (const TripRequest& t : trips) {
    out << t.id << ',' << t.origin << ',' << t.destination << ',' << t.request_time_s << ',';
    if (t.travel_time_s) out << *t.travel_time_s;
    out << '\n';
  }
}

TravelTimeMatrix load_travel_times(const std::string& path) {
  auto lines = csv::read_lines(path);
  const int n = static_cast<int>(lines.size());
  TravelTimeMatrix times(n);
  for (int i = 0; i < n; ++i) {
    auto fields = csv::split(lines[i]);
    if (static_cast<int>(fields.size()) != n)
      throw InputError(path + ": matrix row " + std::to_string(i) + " has " +
                       std::to_string(fields.size()) + " values, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j)
      times.at(i, j) = csv::parse_i64(fields[j], path + " row " + std::to_string(i));
  }
  return times;
}

void save_travel_times(const TravelTimeMatrix& times, const std::string& path) {
  auto out = open_out(path);
  const int n = times.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      out << times.at(i, j);
    }
    out << '\n';
  }
}

}  // namespace relosim
