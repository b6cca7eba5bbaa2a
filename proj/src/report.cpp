#include "relosim/report.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "relosim/config.hpp"
#include "relosim/csv.hpp"
#include "relosim/errors.hpp"
#include "relosim/io.hpp"

namespace relosim {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
}

std::string i64(std::int64_t v) { return std::to_string(v); }

}  // namespace

std::string metrics_to_json(const SimulationMetrics& m, const SimulationConfig& cfg) {
  ordered_json j;
  j["config"] = ordered_json::parse(simulation_config_to_json(cfg));
  j["accepted"] = m.accepted;
  j["rejected"] = m.rejected;
  j["total_requests"] = m.accepted + m.rejected;
  j["acceptance_ratio"] = m.acceptance_ratio;
  j["round_trip_requests"] = m.round_trip_requests;
  j["rejections_per_station"] = m.rejections_per_station;
  j["relocator_units"] = m.relocator_units;
  j["relocator_drive_seconds"] = m.relocator_drive_seconds;
  j["executed_tasks"] = m.executed_tasks;
  j["total_relocated_vehicles"] = m.total_relocated_vehicles;
  j["mean_train_length"] = m.mean_train_length;
  j["relocation_shortfalls"] = m.relocation_shortfalls;
  ordered_json hist = ordered_json::object();
  for (const auto& [len, count] : m.train_length_hist) hist[i64(len)] = count;
  j["train_length_hist"] = hist;
  j["busy_series_minutes"] = m.busy_at_minute.size();
  return j.dump(2) + "\n";
}

void write_metrics_json(const SimulationMetrics& m, const SimulationConfig& cfg,
                        const std::string& path) {
  write_file(path, metrics_to_json(m, cfg));
}

void write_events_csv(const std::vector<SimEventRecord>& events, const std::string& path) {
  std::string out = "time_s,kind,from,to,vehicles,actor\n";
  for (const SimEventRecord& e : events)
    out += i64(e.time_s) + "," + e.kind + "," + i64(e.from) + "," + i64(e.to) + "," +
           i64(e.vehicles) + "," + i64(e.actor) + "\n";
  write_file(path, out);
}

void write_busy_csv(const SimulationMetrics& m, const std::string& path) {
  std::string out = "minute,busy_units_at_start,busy_unit_seconds\n";
  for (std::size_t b = 0; b < m.busy_at_minute.size(); ++b)
    out += i64(static_cast<std::int64_t>(b)) + "," + i64(m.busy_at_minute[b]) + "," +
           i64(m.busy_seconds_per_min[b]) + "\n";
  write_file(path, out);
}

void write_hist_csv(const SimulationMetrics& m, const std::string& path) {
  std::string out = "train_length,count\n";
  for (const auto& [len, count] : m.train_length_hist) out += i64(len) + "," + i64(count) + "\n";
  write_file(path, out);
}

namespace {

std::string cell_key(const SweepCell& c) {
  return std::string(strategy_name(c.strategy)) + "," + i64(c.interval_s) + "," +
         i64(c.max_train) + "," + i64(c.relocator_count);
}

}  // namespace

void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path) {
  std::string out =
      "strategy,T_s,v_T,relocators,units,accepted,rejected,total,acceptance,round_trips,"
      "total_relocated,executed_tasks,mean_train_length,relocator_drive_s,shortfalls\n";
  for (const SweepCell& c : cells) {
    const SimulationMetrics& m = c.metrics;
    out += cell_key(c) + "," + i64(m.relocator_units) + "," + i64(m.accepted) + "," +
           i64(m.rejected) + "," + i64(m.accepted + m.rejected) + "," +
           csv::format_double(m.acceptance_ratio) + "," + i64(m.round_trip_requests) + "," +
           i64(m.total_relocated_vehicles) + "," + i64(m.executed_tasks) + "," +
           csv::format_double(m.mean_train_length) + "," + i64(m.relocator_drive_seconds) + "," +
           i64(m.relocation_shortfalls) + "\n";
  }
  write_file(path, out);
}

void write_sweep_busy_csv(const std::vector<SweepCell>& cells, const std::string& path) {
  std::string out = "strategy,T_s,v_T,relocators,minute,busy_units_at_start,busy_unit_seconds\n";
  for (const SweepCell& c : cells)
    for (std::size_t b = 0; b < c.metrics.busy_at_minute.size(); ++b)
      out += cell_key(c) + "," + i64(static_cast<std::int64_t>(b)) + "," +
             i64(c.metrics.busy_at_minute[b]) + "," + i64(c.metrics.busy_seconds_per_min[b]) +
             "\n";
  write_file(path, out);
}

void write_sweep_hist_csv(const std::vector<SweepCell>& cells, const std::string& path) {
  std::string out = "strategy,T_s,v_T,relocators,train_length,count\n";
  for (const SweepCell& c : cells)
    for (const auto& [len, count] : c.metrics.train_length_hist)
      out += cell_key(c) + "," + i64(len) + "," + i64(count) + "\n";
  write_file(path, out);
}

void write_bounds_outputs(const NoRelocationSizing& sizing, const FluidSolution& fluid,
                          const std::string& out_dir) {
  ensure_dir(out_dir);
  const int n = fluid.alpha.n;

  std::string alpha;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) alpha += ",";
      alpha += csv::format_double(fluid.alpha.at(i, j));
    }
    alpha += "\n";
  }
  write_file(out_dir + "/alpha.csv", alpha);

  std::string flows = "station_id,inbound_veh_per_h,outbound_veh_per_h\n";
  for (int i = 0; i < n; ++i)
    flows += i64(i) + "," + csv::format_double(fluid.inbound_per_h[i]) + "," +
             csv::format_double(fluid.outbound_per_h[i]) + "\n";
  write_file(out_dir + "/flows.csv", flows);

  ordered_json j;
  j["no_relocation"]["per_station_v0"] = sizing.initial_vehicles;
  j["no_relocation"]["total"] = sizing.total;
  j["fluid"]["objective_vehicles"] = fluid.objective_veh;
  j["fluid"]["min_fleet"] = fluid.min_fleet;
  j["fluid"]["min_fleet_ceil"] = fluid.min_fleet_ceil;
  j["fluid"]["certificate_max_dual_violation"] = fluid.certificate;
  j["fluid"]["alpha_matrix_csv_path"] = "alpha.csv";
  j["fluid"]["flows_csv_path"] = "flows.csv";
  write_file(out_dir + "/bounds.json", j.dump(2) + "\n");
}

void write_report(const ReportInputs& inputs, const std::string& out_dir) {
  ensure_dir(out_dir);

  const std::string sweep_path = inputs.sweep_dir + "/sweep.csv";
  const std::string busy_path = inputs.sweep_dir + "/busy.csv";
  const std::string hist_path = inputs.sweep_dir + "/hist.csv";
  const csv::Table sweep = csv::read_table(sweep_path);
  const csv::Table busy = csv::read_table(busy_path);
  const csv::Table hist = csv::read_table(hist_path);

  // Acceptance curve (relocator count on the x axis).
  {
    const int cs = sweep.require_col("strategy", sweep_path);
    const int ct = sweep.require_col("T_s", sweep_path);
    const int cv = sweep.require_col("v_T", sweep_path);
    const int ck = sweep.require_col("relocators", sweep_path);
    const int ca = sweep.require_col("acceptance", sweep_path);
    std::string out = "strategy,T_s,v_T,relocators,acceptance\n";
    for (const auto& row : sweep.rows)
      out += row[cs] + "," + row[ct] + "," + row[cv] + "," + row[ck] + "," + row[ca] + "\n";
    write_file(out_dir + "/acceptance_vs_relocators.csv", out);
  }

  // Busy-unit time series, passed through keyed by the swept parameters.
  {
    const char* cols[] = {"strategy", "T_s", "v_T", "relocators", "minute",
                          "busy_units_at_start", "busy_unit_seconds"};
    std::vector<int> idx;
    for (const char* c : cols) idx.push_back(busy.require_col(c, busy_path));
    std::string out =
        "strategy,T_s,v_T,relocators,minute,busy_units_at_start,busy_unit_seconds\n";
    for (const auto& row : busy.rows) {
      for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + row[idx[i]];
      out += "\n";
    }
    write_file(out_dir + "/busy_series.csv", out);
  }

  // Train-length distribution.
  {
    const char* cols[] = {"strategy", "T_s", "v_T", "relocators", "train_length", "count"};
    std::vector<int> idx;
    for (const char* c : cols) idx.push_back(hist.require_col(c, hist_path));
    std::string out = "strategy,T_s,v_T,relocators,train_length,count\n";
    for (const auto& row : hist.rows) {
      for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + row[idx[i]];
      out += "\n";
    }
    write_file(out_dir + "/train_length_distribution.csv", out);
  }

  // Daily station unbalance, from the scenario bundle when available.
  {
    std::string out = "station_id,daily_unbalance\n";
    if (inputs.bundle_dir) {
      DemandTrace trace;
      trace.stations = load_stations(*inputs.bundle_dir + "/stations.csv");
      trace.trips = load_trips(*inputs.bundle_dir + "/demand.csv");
      const std::vector<std::int64_t> unbalance = station_daily_unbalance(trace);
      for (std::size_t i = 0; i < unbalance.size(); ++i)
        out += i64(static_cast<std::int64_t>(i)) + "," + i64(unbalance[i]) + "\n";
    }
    write_file(out_dir + "/station_unbalance.csv", out);
  }

  // Optimal rebalancing flows, from the bounds stage when available.
  {
    std::string out = "station_id,inbound_veh_per_h,outbound_veh_per_h\n";
    if (inputs.bounds_dir) {
      const std::string flows_path = *inputs.bounds_dir + "/flows.csv";
      const csv::Table flows = csv::read_table(flows_path);
      const int ci = flows.require_col("station_id", flows_path);
      const int cin = flows.require_col("inbound_veh_per_h", flows_path);
      const int cout = flows.require_col("outbound_veh_per_h", flows_path);
      for (const auto& row : flows.rows)
        out += row[ci] + "," + row[cin] + "," + row[cout] + "\n";
    }
    write_file(out_dir + "/rebalancing_flows.csv", out);
  }

  ordered_json figures;
  figures["figures"] = ordered_json::array();
  auto add_figure = [&](const char* name, const char* kind, const char* data, const char* x,
                        ordered_json y, ordered_json series, const char* title) {
    ordered_json f;
    f["name"] = name;
    f["kind"] = kind;
    f["data"] = data;
    f["x"] = x;
    f["y"] = std::move(y);
    if (!series.empty()) f["series"] = std::move(series);
    f["title"] = title;
    figures["figures"].push_back(std::move(f));
  };
  add_figure("station_unbalance", "bar", "station_unbalance.csv", "station_id",
             "daily_unbalance", ordered_json::array(),
             "Daily dropoff-minus-pickup unbalance per station");
  add_figure("rebalancing_flows", "grouped-bar", "rebalancing_flows.csv", "station_id",
             ordered_json::array({"inbound_veh_per_h", "outbound_veh_per_h"}),
             ordered_json::array(), "Optimal rebalancing flows per station");
  add_figure("acceptance_vs_relocators", "line", "acceptance_vs_relocators.csv", "relocators",
             "acceptance", ordered_json::array({"strategy", "T_s", "v_T"}),
             "Accepted requests vs number of relocators");
  add_figure("busy_series", "line", "busy_series.csv", "minute", "busy_units_at_start",
             ordered_json::array({"strategy", "T_s", "v_T", "relocators"}),
             "Busy relocation units over the day");
  add_figure("train_length_distribution", "bar", "train_length_distribution.csv", "train_length",
             "count", ordered_json::array({"strategy", "T_s", "v_T", "relocators"}),
             "Executed train-length distribution");
  write_file(out_dir + "/figures.json", figures.dump(2) + "\n");
}

}  // namespace relosim
