// Result serialization: metrics JSON, sweep tables, fleet-bound outputs, and
// the figure-data emission consumed by plotting tools.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relosim/fleet_bounds.hpp"
#include "relosim/simulator.hpp"
#include "relosim/sweep.hpp"

namespace relosim {

// Single-run outputs.
std::string metrics_to_json(const SimulationMetrics& metrics, const SimulationConfig& cfg);
void write_metrics_json(const SimulationMetrics& metrics, const SimulationConfig& cfg,
                        const std::string& path);
void write_events_csv(const std::vector<SimEventRecord>& events, const std::string& path);
void write_busy_csv(const SimulationMetrics& metrics, const std::string& path);
void write_hist_csv(const SimulationMetrics& metrics, const std::string& path);

// Sweep outputs: one summary row per cell plus long-format per-minute busy
// series and train-length histograms keyed by the swept parameters.
void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path);
void write_sweep_busy_csv(const std::vector<SweepCell>& cells, const std::string& path);
void write_sweep_hist_csv(const std::vector<SweepCell>& cells, const std::string& path);

// Fleet-bound outputs: bounds.json, alpha.csv (dense matrix), flows.csv.
void write_bounds_outputs(const NoRelocationSizing& sizing, const FluidSolution& fluid,
                          const std::string& out_dir);

struct ReportInputs {
  std::string sweep_dir;                 // must hold sweep.csv, busy.csv, hist.csv
  std::optional<std::string> bounds_dir; // optional: flows.csv for the flow figure
  std::optional<std::string> bundle_dir; // optional: demand.csv for the unbalance figure
};

// Emits one tidy CSV per figure analogue plus figures.json describing them.
// Missing optional inputs yield header-only CSVs. Throws InputError naming
// any missing column in the sweep tables.
void write_report(const ReportInputs& inputs, const std::string& out_dir);

}  // namespace relosim
