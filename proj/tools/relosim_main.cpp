// relosim: one binary wiring scenario generation, analytical fleet bounds,
// matching inspection, simulation, parameter sweeps, and figure-data export.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relosim/bundle.hpp"
#include "relosim/config.hpp"
#include "relosim/csv.hpp"
#include "relosim/demand_gen.hpp"
#include "relosim/errors.hpp"
#include "relosim/fleet_bounds.hpp"
#include "relosim/io.hpp"
#include "relosim/rebalancer.hpp"
#include "relosim/report.hpp"
#include "relosim/simulator.hpp"
#include "relosim/sweep.hpp"

namespace {

using namespace relosim;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TraceArgs {
  std::string bundle;
  std::string demand;
  std::string stations;
  std::string times;
  double derive_speed = 0.0;
  std::int64_t horizon = 0;
};

void add_trace_options(CLI::App* cmd, TraceArgs& args) {
  cmd->add_option("--bundle", args.bundle, "scenario bundle directory (manifest + CSVs)");
  cmd->add_option("--demand", args.demand, "trip request CSV (bare-CSV mode)");
  cmd->add_option("--stations", args.stations, "station CSV (bare-CSV mode)");
  cmd->add_option("--travel-times", args.times, "dense station-to-station travel-time CSV");
  cmd->add_option("--derive-speed", args.derive_speed,
                  "derive travel times from station coordinates at this speed (m/s)");
  cmd->add_option("--horizon", args.horizon,
                  "simulation horizon in seconds (bare-CSV mode; default: last request + 1)");
}

DemandTrace load_trace(const TraceArgs& args) {
  DemandTrace trace;
  if (!args.bundle.empty()) {
    if (!args.demand.empty() || !args.stations.empty() || !args.times.empty() ||
        args.horizon != 0)
      throw ConfigError("--bundle conflicts with bare-CSV input flags");
    const std::optional<double> speed =
        args.derive_speed > 0.0 ? std::optional<double>(args.derive_speed) : std::nullopt;
    trace = load_bundle(args.bundle, speed).trace;
  } else {
    if (args.demand.empty() || args.stations.empty())
      throw ConfigError("provide --bundle, or --demand and --stations");
    trace.stations = load_stations(args.stations);
    trace.trips = load_trips(args.demand);
    if (!args.times.empty())
      trace.travel_times = load_travel_times(args.times);
    else if (args.derive_speed > 0.0)
      trace.travel_times = derive_travel_times(trace.stations, args.derive_speed);
    else
      throw ConfigError("provide --travel-times or --derive-speed");
    if (args.horizon > 0)
      trace.horizon_s = args.horizon;
    else
      trace.horizon_s =
          trace.trips.empty() ? 1 : trace.trips.back().request_time_s + 1;
    const auto violations = validate_scenario(trace);
    if (!violations.empty())
      throw InputError(std::string("invalid scenario (") +
                       violation_kind_name(violations.front().kind) +
                       "): " + violations.front().detail);
  }
  return trace;
}

ordered_json describe_app(const CLI::App* app) {
  ordered_json j;
  j["name"] = app->get_name();
  j["description"] = app->get_description();
  j["options"] = ordered_json::array();
  for (const CLI::Option* opt : app->get_options()) {
    ordered_json o;
    o["name"] = opt->get_name();
    o["description"] = opt->get_description();
    o["required"] = opt->get_required();
    o["is_flag"] = opt->get_expected_max() == 0;
    j["options"].push_back(std::move(o));
  }
  j["subcommands"] = ordered_json::array();
  for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; }))
    j["subcommands"].push_back(describe_app(sub));
  return j;
}

int run_gen(const std::string& config_path, const std::string& out_dir) {
  const GeneratorConfig gc = parse_generator_config(read_text_file(config_path));
  const std::vector<Station> stations = deploy_stations(gc.deployment);
  const DemandProfile profile = build_profile(gc, stations);
  ScenarioBundle bundle;
  bundle.trace = synthesize_demand(profile, stations, gc.seed, nullptr, gc.speed_mps);
  bundle.seed = gc.seed;
  bundle.generator = "gen preset=" + gc.preset +
                     (gc.preset == "commuter"
                          ? " daily_trips=" + csv::format_double(gc.daily_trips)
                          : "") +
                     " speed_mps=" + csv::format_double(gc.speed_mps);
  bundle.notes.push_back("travel_times derived from station coordinates at " +
                         csv::format_double(gc.speed_mps) + " m/s");
  save_bundle(bundle, out_dir);
  std::cout << "wrote bundle: " << out_dir << " (" << bundle.trace.stations.size()
            << " stations, " << bundle.trace.trips.size() << " trips, horizon "
            << bundle.trace.horizon_s << " s)\n";
  return 0;
}

int run_bounds(const TraceArgs& targs, const std::string& out_dir) {
  const DemandTrace trace = load_trace(targs);
  const NoRelocationSizing sizing = min_fleet_no_relocation(trace);
  const RateMatrix rates = estimate_rates(trace);
  const FluidSolution fluid = solve_fluid(rates, trace.travel_times);
  write_bounds_outputs(sizing, fluid, out_dir);
  std::cout << "no-relocation fleet: " << sizing.total
            << "; fluid min fleet: " << csv::format_double(fluid.min_fleet) << " (ceil "
            << fluid.min_fleet_ceil << "), results in " << out_dir << "\n";
  return 0;
}

int run_plan(const std::string& snapshot_path, const std::string& out_path) {
  ordered_json snap;
  try {
    snap = ordered_json::parse(read_text_file(snapshot_path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("snapshot is not valid JSON: " + std::string(e.what()));
  }
  if (!snap.contains("balances") || !snap["balances"].is_array())
    throw InputError("snapshot needs a 'balances' array");
  BalanceSnapshot bs;
  for (const auto& v : snap["balances"]) bs.balance.push_back(v.get<std::int64_t>());
  const int n = static_cast<int>(bs.balance.size());

  if (!snap.contains("travel_times") || !snap["travel_times"].is_array())
    throw InputError("snapshot needs a 'travel_times' matrix");
  TravelTimeMatrix times(n);
  {
    const auto& rows = snap["travel_times"];
    if (static_cast<int>(rows.size()) != n)
      throw InputError("travel_times must have one row per station");
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
        throw InputError("travel_times rows must have one entry per station");
      for (int j = 0; j < n; ++j) times.at(i, j) = rows[i][j].get<std::int64_t>();
    }
  }
  const std::int64_t max_train =
      snap.contains("max_train") ? snap["max_train"].get<std::int64_t>() : 8;
  const std::int64_t now_s = snap.contains("now_s") ? snap["now_s"].get<std::int64_t>() : 0;
  const double approach =
      snap.contains("approach_factor") ? snap["approach_factor"].get<double>() : 1.0;

  const Classification cls = classify_stations(bs);
  const MatchResult match =
      match_feeders_recipients(cls.feeders, cls.recipients, max_train, times);

  ordered_json out;
  out["feeders"] = ordered_json::array();
  for (const StationBalance& f : cls.feeders)
    out["feeders"].push_back({{"station", f.station}, {"excess", f.amount}});
  out["recipients"] = ordered_json::array();
  for (const StationBalance& r : cls.recipients)
    out["recipients"].push_back({{"station", r.station}, {"deficit", r.amount}});
  out["diagnostics"] = {{"v_excess", match.diagnostics.v_excess},
                        {"v_deficit", match.diagnostics.v_deficit},
                        {"feasible", match.diagnostics.feasible},
                        {"unserved_deficit", match.diagnostics.unserved_deficit}};
  out["pairs"] = ordered_json::array();
  for (const FeederRecipientPair& p : match.pairs)
    out["pairs"].push_back(
        {{"feeder", p.feeder}, {"recipient", p.recipient}, {"vehicles", p.vehicles}});

  if (snap.contains("relocators")) {
    std::vector<IdleRelocator> idle;
    for (const auto& r : snap["relocators"])
      idle.push_back({r.at("id").get<std::int64_t>(), r.at("station").get<StationId>()});
    const RelocatorMatch rm = match_relocators(match.pairs, idle, times, now_s, approach);
    out["tasks"] = ordered_json::array();
    for (const RelocationTask& t : rm.tasks)
      out["tasks"].push_back({{"relocator", t.relocator},
                              {"feeder", t.feeder},
                              {"recipient", t.recipient},
                              {"vehicles", t.vehicles},
                              {"depart_s", t.depart_s},
                              {"feeder_arrival_s", t.feeder_arrival_s},
                              {"recipient_arrival_s", t.recipient_arrival_s}});
    out["backlog"] = ordered_json::array();
    for (const FeederRecipientPair& p : rm.backlog)
      out["backlog"].push_back(
          {{"feeder", p.feeder}, {"recipient", p.recipient}, {"vehicles", p.vehicles}});
  }

  const std::string text = out.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + out_path);
    f << text;
  }
  return 0;
}

int run_sim(const TraceArgs& targs, const std::string& config_path, const std::string& out_dir) {
  const DemandTrace trace = load_trace(targs);
  const SimulationConfig cfg = parse_simulation_config(read_text_file(config_path));
  const SimulationMetrics metrics = simulate(trace, cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create directory " + out_dir + ": " + ec.message());
  write_metrics_json(metrics, cfg, out_dir + "/metrics.json");
  write_busy_csv(metrics, out_dir + "/busy.csv");
  write_hist_csv(metrics, out_dir + "/hist.csv");
  if (cfg.record_events) write_events_csv(metrics.events, out_dir + "/events.csv");
  std::cout << "accepted " << metrics.accepted << "/" << (metrics.accepted + metrics.rejected)
            << " (" << csv::format_double(metrics.acceptance_ratio * 100.0)
            << "%), results in " << out_dir << "\n";
  return 0;
}

int run_sweep_cmd(const TraceArgs& targs, const std::string& config_path,
                  const std::string& out_dir) {
  const DemandTrace trace = load_trace(targs);
  const std::string text = read_text_file(config_path);
  const SimulationConfig base = parse_simulation_config(text);
  const SweepSettings settings = parse_sweep_settings(text);
  const std::vector<SweepCell> cells = run_sweep(trace, base, settings.grid, settings.threads);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create directory " + out_dir + ": " + ec.message());
  write_sweep_csv(cells, out_dir + "/sweep.csv");
  write_sweep_busy_csv(cells, out_dir + "/busy.csv");
  write_sweep_hist_csv(cells, out_dir + "/hist.csv");
  std::cout << cells.size() << " sweep cells written to " << out_dir << "\n";
  return 0;
}

int run_report(const ReportInputs& inputs, const std::string& out_dir) {
  write_report(inputs, out_dir);
  std::cout << "figure data written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"station-based shared-fleet rebalancing: simulator and analysis toolkit"};
  app.require_subcommand(0, 1);
  bool help_json = false;
  app.add_flag("--help-json", help_json, "print a machine-readable command reference and exit");

  std::string gen_config, gen_out;
  CLI::App* gen = app.add_subcommand("gen", "synthesize a demand scenario bundle");
  gen->add_option("--config", gen_config, "generator config JSON")->required();
  gen->add_option("--out", gen_out, "output bundle directory")->required();

  TraceArgs bounds_trace;
  std::string bounds_out;
  CLI::App* bounds = app.add_subcommand("bounds", "analytical fleet-sizing bounds");
  add_trace_options(bounds, bounds_trace);
  bounds->add_option("--out", bounds_out, "output directory")->required();

  std::string plan_snapshot, plan_out;
  CLI::App* plan = app.add_subcommand("plan", "run one matching round from a JSON snapshot");
  plan->add_option("--snapshot", plan_snapshot, "balance snapshot JSON")->required();
  plan->add_option("--out", plan_out, "output JSON path (default: stdout)");

  TraceArgs sim_trace;
  std::string sim_config, sim_out;
  CLI::App* sim = app.add_subcommand("sim", "simulate one configuration");
  add_trace_options(sim, sim_trace);
  sim->add_option("--config", sim_config, "simulation config JSON")->required();
  sim->add_option("--out", sim_out, "output directory")->required();

  TraceArgs sweep_trace;
  std::string sweep_config, sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid of simulations");
  add_trace_options(sweep, sweep_trace);
  sweep->add_option("--config", sweep_config, "simulation config JSON with a sweep block")
      ->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();

  std::string report_sweep, report_bounds, report_bundle, report_out;
  CLI::App* report = app.add_subcommand("report", "emit plot-ready figure data");
  report->add_option("--sweep", report_sweep, "directory with sweep.csv/busy.csv/hist.csv")
      ->required();
  report->add_option("--bounds", report_bounds, "bounds output directory (flow figure)");
  report->add_option("--bundle", report_bundle, "scenario bundle (unbalance figure)");
  report->add_option("--out", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (help_json) {
      std::cout << describe_app(&app).dump(2) << "\n";
      return 0;
    }
    if (gen->parsed()) return run_gen(gen_config, gen_out);
    if (bounds->parsed()) return run_bounds(bounds_trace, bounds_out);
    if (plan->parsed()) return run_plan(plan_snapshot, plan_out);
    if (sim->parsed()) return run_sim(sim_trace, sim_config, sim_out);
    if (sweep->parsed()) return run_sweep_cmd(sweep_trace, sweep_config, sweep_out);
    if (report->parsed()) {
      ReportInputs inputs;
      inputs.sweep_dir = report_sweep;
      if (!report_bounds.empty()) inputs.bounds_dir = report_bounds;
      if (!report_bundle.empty()) inputs.bundle_dir = report_bundle;
      return run_report(inputs, report_out);
    }
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
}
