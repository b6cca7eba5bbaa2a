// Scenario bundle persistence: a directory of stations.csv / demand.csv /
// travel_times.csv plus a manifest with content hashes for tamper detection.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relosim/types.hpp"

namespace relosim {

inline constexpr int kBundleFormatVersion = 1;

struct ScenarioBundle {
  DemandTrace trace;
  std::uint64_t seed = 0;
  std::string generator;  // free-form provenance, e.g. "gen preset=commuter daily_trips=2000"
  std::vector<std::string> notes;
};

// FNV-1a 64-bit over raw bytes; manifest stores "fnv1a64:<16 hex digits>".
std::uint64_t fnv1a64(const std::string& bytes);
std::string content_hash(const std::string& bytes);

// Writes stations.csv, demand.csv, travel_times.csv and manifest.json into
// dir (created if missing). Output is byte-deterministic for equal bundles.
void save_bundle(const ScenarioBundle& bundle, const std::string& dir);

// Verifies the manifest version and every listed content hash (mismatch or
// unknown version -> input error). If travel_times.csv is not part of the
// bundle, derive_speed_mps must be provided; the derivation is recorded in
// notes.
ScenarioBundle load_bundle(const std::string& dir,
                           std::optional<double> derive_speed_mps = std::nullopt);

}  // namespace relosim
