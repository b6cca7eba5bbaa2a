#include "relosim/sweep.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "relosim/errors.hpp"

namespace relosim {

std::vector<SweepCell> run_sweep(const DemandTrace& trace, const SimulationConfig& base,
                                 const SweepGrid& grid, int threads) {
  if (grid.strategies.empty() || grid.intervals_s.empty() || grid.train_sizes.empty() ||
      grid.relocator_counts.empty())
    throw ConfigError("sweep grid has an empty dimension");

  std::vector<SweepCell> cells;
  for (Strategy s : grid.strategies)
    for (std::int64_t t : grid.intervals_s)
      for (std::int64_t v : grid.train_sizes)
        for (std::int64_t k : grid.relocator_counts)
          cells.push_back({s, t, v, k, {}});

  auto cell_config = [&](const SweepCell& c) {
    SimulationConfig cfg = base;
    cfg.strategy = c.strategy;
    cfg.relocation_interval_s = c.interval_s;
    cfg.max_train = c.max_train;
    cfg.relocator_count = c.relocator_count;
    return cfg;
  };
  for (const SweepCell& c : cells) validate_config(trace, cell_config(c));

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (SweepCell& c : cells) c.metrics = simulate(trace, cell_config(c));
    return cells;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      try {
        cells[i].metrics = simulate(trace, cell_config(cells[i]));
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
  return cells;
}

}  // namespace relosim
