// Parameter sweep: run one independent simulation per grid cell, optionally
// in parallel, with a deterministic result order.
#pragma once

#include <cstdint>
#include <vector>

#include "relosim/simulator.hpp"

namespace relosim {

struct SweepGrid {
  std::vector<Strategy> strategies;
  std::vector<std::int64_t> intervals_s;
  std::vector<std::int64_t> train_sizes;
  std::vector<std::int64_t> relocator_counts;
};

struct SweepCell {
  Strategy strategy = Strategy::none;
  std::int64_t interval_s = 0;
  std::int64_t max_train = 0;
  std::int64_t relocator_count = 0;
  SimulationMetrics metrics;
};

// Cells are ordered strategy -> interval -> train size -> relocators. Every
// cell's config is validated up front; an invalid combination rejects the
// whole sweep. Results are identical for any thread count.
std::vector<SweepCell> run_sweep(const DemandTrace& trace, const SimulationConfig& base,
                                 const SweepGrid& grid, int threads);

}  // namespace relosim
