#include "relosim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "relosim/errors.hpp"

namespace relosim {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::none: return "none";
    case Strategy::standard: return "standard";
    case Strategy::stackable: return "stackable";
    case Strategy::autonomous: return "autonomous";
  }
  return "?";
}
const char* placement_name(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::proportional_to_outflow: return "proportional-to-outflow";
    case PlacementPolicy::uniform: return "uniform";
    case PlacementPolicy::explicit_counts: return "explicit";
  }
  return "?";
}
const char* capacity_mode_name(CapacityMode m) {
  return m == CapacityMode::service ? "service" : "train-car";
}
const char* submode_name(StandardSubmode m) { return m == StandardSubmode::pair ? "pair" : "bike"; }
const char* control_policy_name(ControlPolicy p) {
  return p == ControlPolicy::zero ? "zero" : "conservative-one";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "none") return Strategy::none;
  if (s == "standard") return Strategy::standard;
  if (s == "stackable") return Strategy::stackable;
  if (s == "autonomous") return Strategy::autonomous;
  throw ConfigError("unknown strategy: " + s);
}
PlacementPolicy parse_placement(const std::string& s) {
  if (s == "proportional-to-outflow") return PlacementPolicy::proportional_to_outflow;
  if (s == "uniform") return PlacementPolicy::uniform;
  if (s == "explicit") return PlacementPolicy::explicit_counts;
  throw ConfigError("unknown placement policy: " + s);
}
CapacityMode parse_capacity_mode(const std::string& s) {
  if (s == "service") return CapacityMode::service;
  if (s == "train-car") return CapacityMode::train_car;
  throw ConfigError("unknown capacity mode: " + s);
}
StandardSubmode parse_submode(const std::string& s) {
  if (s == "pair") return StandardSubmode::pair;
  if (s == "bike") return StandardSubmode::bike;
  throw ConfigError("unknown standard submode: " + s);
}
ControlPolicy parse_control_policy(const std::string& s) {
  if (s == "zero") return ControlPolicy::zero;
  if (s == "conservative-one") return ControlPolicy::conservative_one;
  throw ConfigError("unknown control policy: " + s);
}

std::int64_t relocator_unit_count(const SimulationConfig& cfg) {
  if (cfg.strategy != Strategy::standard && cfg.strategy != Strategy::stackable) return 0;
  if (cfg.strategy == Strategy::standard && cfg.standard_submode == StandardSubmode::pair)
    return cfg.relocator_count / 2;
  return cfg.relocator_count;
}

std::int64_t effective_train_capacity(const SimulationConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::none: return 1;
    case Strategy::standard: return 1;
    case Strategy::stackable:
      return cfg.capacity_mode == CapacityMode::service ? cfg.max_train : cfg.max_train - 1;
    case Strategy::autonomous: return kUnboundedTrain;
  }
  return 1;
}

void validate_config(const DemandTrace& trace, const SimulationConfig& cfg) {
  const int n = trace.station_count();
  if (cfg.fleet_size < 0) throw ConfigError("fleet_size must be >= 0");
  if (cfg.relocation_interval_s <= 0) throw ConfigError("relocation interval must be > 0");
  if (cfg.relocator_count < 0) throw ConfigError("relocator_count must be >= 0");
  if (!(cfg.bike_factor > 0.0)) throw ConfigError("bike_factor must be > 0");
  if (cfg.strategy == Strategy::stackable && cfg.max_train < 2)
    throw ConfigError("stackable strategy needs max_train >= 2");
  if ((cfg.strategy == Strategy::standard || cfg.strategy == Strategy::stackable) &&
      relocator_unit_count(cfg) < 1)
    throw ConfigError("strategy " + std::string(strategy_name(cfg.strategy)) +
                      " needs at least one relocation unit (pair submode needs 2 workers)");
  if (cfg.placement == PlacementPolicy::explicit_counts) {
    if (static_cast<int>(cfg.explicit_placement.size()) != n)
      throw ConfigError("explicit placement must list every station");
    std::int64_t total = 0;
    for (std::int64_t c : cfg.explicit_placement) {
      if (c < 0) throw ConfigError("explicit placement counts must be >= 0");
      total += c;
    }
    if (total != cfg.fleet_size)
      throw ConfigError("explicit placement must sum to fleet_size");
  }
  for (StationId s : cfg.relocator_start)
    if (s < 0 || s >= n) throw ConfigError("relocator start station out of range");
}

std::vector<std::int64_t> initial_placement(const DemandTrace& trace, const SimulationConfig& cfg) {
  const int n = trace.station_count();
  if (cfg.placement == PlacementPolicy::explicit_counts) return cfg.explicit_placement;

  std::vector<std::int64_t> weight(n, 1);
  if (cfg.placement == PlacementPolicy::proportional_to_outflow) {
    std::vector<std::int64_t> w(n, 0);
    for (const TripRequest& t : trace.trips) {
      if (t.request_time_s >= 7200) break;  // trips are time-sorted
      w[t.origin] += 1;
    }
    std::int64_t sum = 0;
    for (std::int64_t x : w) sum += x;
    if (sum > 0) weight = std::move(w);
  }

  // Integer largest-remainder apportionment: exact and platform-independent.
  std::int64_t wsum = 0;
  for (std::int64_t x : weight) wsum += x;
  std::vector<std::int64_t> placed(n, 0), rem(n, 0);
  std::int64_t assigned = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t q = cfg.fleet_size * weight[i];
    placed[i] = q / wsum;
    rem[i] = q % wsum;
    assigned += placed[i];
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rem[a] != rem[b] ? rem[a] > rem[b] : a < b; });
  for (int k = 0; assigned < cfg.fleet_size; ++k, ++assigned) placed[order[k % n]] += 1;
  return placed;
}

namespace {

// Priorities: arrivals land first, then relocator transitions, then the
// planning tick, and pickup requests see the post-arrival state last.
enum EvKind : int {
  kCustomerArrival = 0,
  kRelocationArrival = 1,
  kRelocatorAtFeeder = 2,
  kRelocatorIdle = 3,
  kRelocationTick = 4,
  kPickupRequest = 5,
};

struct Event {
  std::int64_t time_s;
  int prio;
  std::int64_t seq;
  std::int64_t a;  // slot / task / trip / interval index, per kind
};
struct EventLater {
  bool operator()(const Event& x, const Event& y) const {
    if (x.time_s != y.time_s) return x.time_s > y.time_s;
    if (x.prio != y.prio) return x.prio > y.prio;
    return x.seq > y.seq;
  }
};

struct Flight {
  StationId dest = 0;
  std::int64_t arrive_s = 0;
  std::int64_t vehicles = 0;
  bool active = false;
};

struct ActiveTask {
  RelocationTask plan;
  std::int64_t unit = 0;
  std::int64_t loaded = -1;  // set on feeder arrival
};

struct Unit {
  StationId station = 0;
  bool busy = false;
};

class Engine {
 public:
  Engine(const DemandTrace& trace, const SimulationConfig& cfg)
      : trace_(trace), cfg_(cfg), n_(trace.station_count()) {}

  SimulationMetrics run() {
    parked_ = initial_placement(trace_, cfg_);
    metrics_.rejections_per_station.assign(n_, 0);
    metrics_.relocator_units = relocator_unit_count(cfg_);
    units_.resize(metrics_.relocator_units);
    for (std::size_t u = 0; u < units_.size(); ++u) {
      if (!cfg_.relocator_start.empty())
        units_[u].station = cfg_.relocator_start[u % cfg_.relocator_start.size()];
      else
        units_[u].station = static_cast<StationId>(n_ > 0 ? u % n_ : 0);
    }
    v_t_eff_ = effective_train_capacity(cfg_);
    approach_factor_ = cfg_.strategy == Strategy::standard &&
                               cfg_.standard_submode == StandardSubmode::bike
                           ? cfg_.bike_factor
                           : 1.0;

    for (std::size_t i = 0; i < trace_.trips.size(); ++i)
      push(trace_.trips[i].request_time_s, kPickupRequest, static_cast<std::int64_t>(i));
    if (cfg_.strategy != Strategy::none)
      for (std::int64_t k = 0; k * cfg_.relocation_interval_s < trace_.horizon_s; ++k)
        push(k * cfg_.relocation_interval_s, kRelocationTick, k);

    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      dispatch(ev);
      if (cfg_.check_invariants) check_invariants(ev.time_s);
    }

    finish_metrics();
    return std::move(metrics_);
  }

 private:
  void push(std::int64_t time_s, EvKind kind, std::int64_t a) {
    queue_.push(Event{time_s, kind, seq_++, a});
  }

  std::size_t new_flight(StationId dest, std::int64_t arrive_s, std::int64_t vehicles) {
    std::size_t slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
    } else {
      slot = flights_.size();
      flights_.emplace_back();
    }
    flights_[slot] = Flight{dest, arrive_s, vehicles, true};
    in_flight_vehicles_ += vehicles;
    return slot;
  }

  void land_flight(std::size_t slot) {
    Flight& f = flights_[slot];
    parked_[f.dest] += f.vehicles;
    in_flight_vehicles_ -= f.vehicles;
    f.active = false;
    free_slots_.push_back(slot);
  }

  void record(std::int64_t t, const char* kind, StationId from, StationId to,
              std::int64_t vehicles, std::int64_t actor) {
    if (!cfg_.record_events) return;
    metrics_.events.push_back({t, kind, from, to, vehicles, actor});
  }

  void dispatch(const Event& ev) {
    switch (ev.prio) {
      case kCustomerArrival: {
        const Flight f = flights_[ev.a];
        land_flight(ev.a);
        record(ev.time_s, "customer_arrival", -1, f.dest, f.vehicles, -1);
        break;
      }
      case kRelocationArrival: {
        const Flight f = flights_[ev.a];
        land_flight(ev.a);
        record(ev.time_s, "relocation_arrival", -1, f.dest, f.vehicles, -1);
        break;
      }
      case kRelocatorAtFeeder: on_feeder_arrival(ev); break;
      case kRelocatorIdle: on_unit_idle(ev); break;
      case kRelocationTick: on_tick(ev); break;
      case kPickupRequest: on_pickup(ev); break;
      default: break;
    }
  }

  void on_pickup(const Event& ev) {
    const TripRequest& trip = trace_.trips[ev.a];
    if (trip.origin == trip.destination) metrics_.round_trip_requests += 1;
    if (parked_[trip.origin] >= 1) {
      parked_[trip.origin] -= 1;
      metrics_.accepted += 1;
      const std::int64_t arrive = ev.time_s + trace_.trip_travel_time(trip);
      const std::size_t slot = new_flight(trip.destination, arrive, 1);
      push(arrive, kCustomerArrival, static_cast<std::int64_t>(slot));
      record(ev.time_s, "pickup_accepted", trip.origin, trip.destination, 1, trip.id);
    } else {
      metrics_.rejected += 1;
      metrics_.rejections_per_station[trip.origin] += 1;
      record(ev.time_s, "pickup_rejected", trip.origin, trip.destination, 0, trip.id);
    }
  }

  void on_tick(const Event& ev) {
    backlog_.clear();  // stale pairs from the previous interval are void
    record(ev.time_s, "tick", -1, -1, 0, ev.a);

    std::vector<PendingArrival> pending;
    for (const Flight& f : flights_)
      if (f.active) pending.push_back({f.dest, f.arrive_s, f.vehicles});

    const BalanceSnapshot snap = compute_balance(parked_, pending, trace_, ev.a,
                                                 cfg_.relocation_interval_s, cfg_.control_policy);
    const Classification cls = classify_stations(snap);
    if (cls.feeders.empty() || cls.recipients.empty()) return;

    const MatchResult match =
        match_feeders_recipients(cls.feeders, cls.recipients, v_t_eff_, trace_.travel_times);
    if (match.pairs.empty()) return;

    if (cfg_.strategy == Strategy::autonomous) {
      const AutonomousDispatch dis =
          autonomous_dispatch(match.pairs, parked_, trace_.travel_times, ev.time_s);
      metrics_.relocation_shortfalls += dis.shortfall_vehicles;
      for (const VehicleMovement& m : dis.movements) {
        parked_[m.from] -= m.vehicles;
        metrics_.total_relocated_vehicles += m.vehicles;
        const std::size_t slot = new_flight(m.to, m.arrival_s, m.vehicles);
        push(m.arrival_s, kRelocationArrival, static_cast<std::int64_t>(slot));
        record(ev.time_s, "auto_depart", m.from, m.to, m.vehicles, -1);
      }
      return;
    }

    std::vector<IdleRelocator> idle;
    for (std::size_t u = 0; u < units_.size(); ++u)
      if (!units_[u].busy) idle.push_back({static_cast<std::int64_t>(u), units_[u].station});
    RelocatorMatch rm =
        match_relocators(match.pairs, idle, trace_.travel_times, ev.time_s, approach_factor_);
    backlog_ = std::move(rm.backlog);
    for (const RelocationTask& task : rm.tasks) start_task(task);
  }

  void start_task(const RelocationTask& task) {
    units_[task.relocator].busy = true;
    busy_units_ += 1;
    const std::size_t idx = tasks_.size();
    tasks_.push_back({task, task.relocator, -1});
    busy_spans_.push_back({task.depart_s, task.recipient_arrival_s});
    metrics_.relocator_drive_seconds += task.recipient_arrival_s - task.depart_s;
    push(task.feeder_arrival_s, kRelocatorAtFeeder, static_cast<std::int64_t>(idx));
    record(task.depart_s, "task_depart", task.feeder, task.recipient, task.vehicles,
           task.relocator);
  }

  void on_feeder_arrival(const Event& ev) {
    ActiveTask& t = tasks_[ev.a];
    const std::int64_t loaded = std::min(t.plan.vehicles, parked_[t.plan.feeder]);
    t.loaded = loaded;
    metrics_.relocation_shortfalls += t.plan.vehicles - loaded;
    record(ev.time_s, "task_load", t.plan.feeder, t.plan.recipient, loaded, t.unit);
    if (loaded >= 1) {
      parked_[t.plan.feeder] -= loaded;
      metrics_.executed_tasks += 1;
      metrics_.total_relocated_vehicles += loaded;
      metrics_.train_length_hist[loaded] += 1;
      const std::size_t slot = new_flight(t.plan.recipient, t.plan.recipient_arrival_s, loaded);
      push(t.plan.recipient_arrival_s, kRelocationArrival, static_cast<std::int64_t>(slot));
    }
    push(t.plan.recipient_arrival_s, kRelocatorIdle, ev.a);
  }

  void on_unit_idle(const Event& ev) {
    const ActiveTask& t = tasks_[ev.a];
    units_[t.unit].busy = false;
    units_[t.unit].station = t.plan.recipient;
    busy_units_ -= 1;
    record(ev.time_s, "relocator_idle", -1, t.plan.recipient, 0, t.unit);
    if (!cfg_.reassign_on_idle || backlog_.empty()) return;
    std::vector<IdleRelocator> just_this = {{t.unit, t.plan.recipient}};
    RelocatorMatch rm =
        match_relocators(backlog_, just_this, trace_.travel_times, ev.time_s, approach_factor_);
    backlog_ = std::move(rm.backlog);
    for (const RelocationTask& task : rm.tasks) start_task(task);
  }

  void check_invariants(std::int64_t now_s) {
    std::int64_t parked_total = 0;
    for (int i = 0; i < n_; ++i) {
      if (parked_[i] < 0)
        throw std::logic_error("station " + std::to_string(i) + " negative at t=" +
                               std::to_string(now_s));
      parked_total += parked_[i];
    }
    std::int64_t carrying = 0;
    for (const Flight& f : flights_)
      if (f.active) carrying += f.vehicles;
    if (carrying != in_flight_vehicles_)
      throw std::logic_error("in-flight ledger drift at t=" + std::to_string(now_s));
    if (parked_total + carrying != cfg_.fleet_size)
      throw std::logic_error("fleet conservation broken at t=" + std::to_string(now_s) + ": " +
                             std::to_string(parked_total) + "+" + std::to_string(carrying) +
                             " != " + std::to_string(cfg_.fleet_size));
    if (busy_units_ < 0 || busy_units_ > static_cast<std::int64_t>(units_.size()))
      throw std::logic_error("busy unit count out of range at t=" + std::to_string(now_s));
  }

  void finish_metrics() {
    const std::int64_t total = metrics_.accepted + metrics_.rejected;
    metrics_.acceptance_ratio =
        total > 0 ? static_cast<double>(metrics_.accepted) / static_cast<double>(total) : 1.0;
    metrics_.mean_train_length =
        metrics_.executed_tasks > 0
            ? static_cast<double>(metrics_.total_relocated_vehicles) /
                  static_cast<double>(metrics_.executed_tasks)
            : 0.0;

    std::int64_t series_end_s = trace_.horizon_s;
    for (const auto& span : busy_spans_) series_end_s = std::max(series_end_s, span.second);
    const std::int64_t bins = (series_end_s + 59) / 60;
    metrics_.busy_at_minute.assign(bins, 0);
    metrics_.busy_seconds_per_min.assign(bins, 0);
    for (const auto& [from_s, to_s] : busy_spans_) {
      for (std::int64_t b = from_s / 60; b * 60 < to_s && b < bins; ++b) {
        const std::int64_t lo = std::max(from_s, b * 60);
        const std::int64_t hi = std::min(to_s, (b + 1) * 60);
        if (hi > lo) metrics_.busy_seconds_per_min[b] += hi - lo;
        if (from_s <= b * 60 && b * 60 < to_s) metrics_.busy_at_minute[b] += 1;
      }
    }
  }

  const DemandTrace& trace_;
  const SimulationConfig& cfg_;
  const int n_;

  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::int64_t seq_ = 0;

  std::vector<std::int64_t> parked_;
  std::vector<Flight> flights_;
  std::vector<std::size_t> free_slots_;
  std::int64_t in_flight_vehicles_ = 0;

  std::vector<Unit> units_;
  std::int64_t busy_units_ = 0;
  std::vector<ActiveTask> tasks_;
  std::vector<FeederRecipientPair> backlog_;
  std::vector<std::pair<std::int64_t, std::int64_t>> busy_spans_;

  std::int64_t v_t_eff_ = 1;
  double approach_factor_ = 1.0;
  SimulationMetrics metrics_;
};

}  // namespace

SimulationMetrics simulate(const DemandTrace& trace, const SimulationConfig& cfg) {
  const std::vector<ScenarioViolation> violations = validate_scenario(trace);
  if (!violations.empty())
    throw InputError("invalid demand trace: " + violations.front().detail);
  validate_config(trace, cfg);
  return Engine(trace, cfg).run();
}

}  // namespace relosim
