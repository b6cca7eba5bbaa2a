#include "relosim/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relosim/demand_gen.hpp"
#include "relosim/errors.hpp"
#include "relosim/io.hpp"

namespace relosim {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string content_hash(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << bytes;
}

}  // namespace

void save_bundle(const ScenarioBundle& bundle, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());

  const std::string stations_path = dir + "/stations.csv";
  const std::string demand_path = dir + "/demand.csv";
  const std::string times_path = dir + "/travel_times.csv";
  save_stations(bundle.trace.stations, stations_path);
  save_trips(bundle.trace.trips, demand_path);
  save_travel_times(bundle.trace.travel_times, times_path);

  ordered_json manifest;
  manifest["format_version"] = kBundleFormatVersion;
  manifest["kind"] = "scenario-bundle";
  manifest["seed"] = bundle.seed;
  manifest["generator"] = bundle.generator;
  manifest["horizon_s"] = bundle.trace.horizon_s;
  ordered_json files;
  files["stations.csv"] = content_hash(read_bytes(stations_path));
  files["demand.csv"] = content_hash(read_bytes(demand_path));
  files["travel_times.csv"] = content_hash(read_bytes(times_path));
  manifest["files"] = files;
  manifest["notes"] = bundle.notes;
  write_bytes(dir + "/manifest.json", manifest.dump(2) + "\n");
}

ScenarioBundle load_bundle(const std::string& dir, std::optional<double> derive_speed_mps) {
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(read_bytes(dir + "/manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed manifest in " + dir + ": " + e.what());
  }
  if (!manifest.contains("format_version") || !manifest["format_version"].is_number_integer() ||
      manifest["format_version"].get<int>() != kBundleFormatVersion)
    throw InputError("unsupported bundle format version in " + dir);
  if (!manifest.contains("files") || !manifest["files"].is_object())
    throw InputError("manifest lacks a files table in " + dir);

  for (const auto& [name, hash] : manifest["files"].items()) {
    const std::string bytes = read_bytes(dir + "/" + name);
    if (content_hash(bytes) != hash.get<std::string>())
      throw InputError("content hash mismatch for " + name + " in " + dir);
  }
  const auto& files = manifest["files"];
  if (!files.contains("stations.csv") || !files.contains("demand.csv"))
    throw InputError("bundle must list stations.csv and demand.csv");

  ScenarioBundle bundle;
  bundle.trace.stations = load_stations(dir + "/stations.csv");
  bundle.trace.trips = load_trips(dir + "/demand.csv");
  if (files.contains("travel_times.csv")) {
    bundle.trace.travel_times = load_travel_times(dir + "/travel_times.csv");
  } else if (derive_speed_mps) {
    bundle.trace.travel_times = derive_travel_times(bundle.trace.stations, *derive_speed_mps);
    bundle.notes.push_back("travel_times derived from station coordinates at " +
                           std::to_string(*derive_speed_mps) + " m/s");
  } else {
    throw InputError("bundle has no travel_times.csv; pass a derivation speed");
  }

  if (!manifest.contains("horizon_s") || !manifest["horizon_s"].is_number_integer())
    throw InputError("manifest lacks horizon_s in " + dir);
  bundle.trace.horizon_s = manifest["horizon_s"].get<std::int64_t>();
  if (manifest.contains("seed")) bundle.seed = manifest["seed"].get<std::uint64_t>();
  if (manifest.contains("generator")) bundle.generator = manifest["generator"].get<std::string>();
  if (manifest.contains("notes"))
    for (const auto& note : manifest["notes"]) bundle.notes.push_back(note.get<std::string>());

  const auto violations = validate_scenario(bundle.trace);
  if (!violations.empty())
    throw InputError("bundle " + dir + " holds an invalid scenario: " + violations.front().detail);
  return bundle;
}

}  // namespace relosim
