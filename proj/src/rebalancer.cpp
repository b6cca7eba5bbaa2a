#include "relosim/rebalancer.hpp"

#include <algorithm>
#include <cmath>

#include "relosim/errors.hpp"

namespace relosim {

BalanceSnapshot compute_balance(const std::vector<std::int64_t>& parked,
                                const std::vector<PendingArrival>& pending,
                                const DemandTrace& trace, std::int64_t k,
                                std::int64_t interval_len_s, ControlPolicy policy) {
  if (interval_len_s <= 0) throw ConfigError("relocation interval must be > 0");
  const int n = trace.station_count();
  if (static_cast<int>(parked.size()) != n)
    throw ConfigError("parked vector does not match station count");

  BalanceSnapshot snap;
  snap.interval_start_s = k * interval_len_s;
  snap.interval_len_s = interval_len_s;
  snap.parked = parked;
  snap.expected_dropoffs.assign(n, 0);
  snap.expected_pickups.assign(n, 0);
  snap.control.assign(n, 0);
  snap.balance.assign(n, 0);

  const std::int64_t start = snap.interval_start_s;
  const std::int64_t end = start + interval_len_s;

  for (const PendingArrival& p : pending)
    if (p.time_s >= start && p.time_s < end) snap.expected_dropoffs[p.station] += p.vehicles;

  // Trips are sorted by request time; walk just the window.
  auto first = std::lower_bound(trace.trips.begin(), trace.trips.end(), start,
                                [](const TripRequest& t, std::int64_t v) {
                                  return t.request_time_s < v;
                                });
  for (auto it = first; it != trace.trips.end() && it->request_time_s < end; ++it) {
    snap.expected_pickups[it->origin] += 1;
    if (it->request_time_s + trace.trip_travel_time(*it) < end)
      snap.expected_dropoffs[it->destination] += 1;
  }

  for (int i = 0; i < n; ++i) {
    const std::int64_t rest = snap.parked[i] + snap.expected_dropoffs[i] - snap.expected_pickups[i];
    if (policy == ControlPolicy::conservative_one && rest > 0) snap.control[i] = 1;
    snap.balance[i] = rest - snap.control[i];
  }
  return snap;
}

Classification classify_stations(const BalanceSnapshot& snapshot) {
  Classification cls;
  const int n = static_cast<int>(snapshot.balance.size());
  for (int i = 0; i < n; ++i) {
    const std::int64_t b = snapshot.balance[i];
    if (b > 0)
      cls.feeders.push_back({static_cast<StationId>(i), b});
    else if (b < 0)
      cls.recipients.push_back({static_cast<StationId>(i), -b});
  }
  auto by_amount = [](const StationBalance& a, const StationBalance& b) {
    return a.amount != b.amount ? a.amount > b.amount : a.station < b.station;
  };
  std::sort(cls.feeders.begin(), cls.feeders.end(), by_amount);
  std::sort(cls.recipients.begin(), cls.recipients.end(), by_amount);
  for (const StationBalance& f : cls.feeders) cls.diagnostics.v_excess += f.amount;
  for (const StationBalance& r : cls.recipients) cls.diagnostics.v_deficit += r.amount;
  cls.diagnostics.feasible = cls.diagnostics.v_excess >= cls.diagnostics.v_deficit;
  cls.diagnostics.unserved_deficit =
      std::max<std::int64_t>(0, cls.diagnostics.v_deficit - cls.diagnostics.v_excess);
  return cls;
}

MatchResult match_feeders_recipients(const std::vector<StationBalance>& feeders,
                                     const std::vector<StationBalance>& recipients,
                                     std::int64_t max_train, const TravelTimeMatrix& times) {
  if (max_train < 1) throw ConfigError("max train size must be >= 1");
  MatchResult res;
  std::vector<StationBalance> fs(feeders), rs(recipients);
  for (const StationBalance& f : fs) {
    if (f.amount <= 0) throw ConfigError("feeder with non-positive excess");
    res.diagnostics.v_excess += f.amount;
  }
  for (const StationBalance& r : rs) {
    if (r.amount <= 0) throw ConfigError("recipient with non-positive deficit");
    res.diagnostics.v_deficit += r.amount;
  }
  res.diagnostics.feasible = res.diagnostics.v_excess >= res.diagnostics.v_deficit;

  while (!fs.empty() && !rs.empty()) {
    std::size_t ri = 0;
    for (std::size_t i = 1; i < rs.size(); ++i) {
      if (rs[i].amount > rs[ri].amount ||
          (rs[i].amount == rs[ri].amount && rs[i].station < rs[ri].station))
        ri = i;
    }
    const StationId r = rs[ri].station;

    std::size_t fi = 0;
    for (std::size_t i = 1; i < fs.size(); ++i) {
      if (fs[i].amount != fs[fi].amount) {
        if (fs[i].amount > fs[fi].amount) fi = i;
        continue;
      }
      const std::int64_t ti = times.at(fs[i].station, r);
      const std::int64_t tf = times.at(fs[fi].station, r);
      if (ti < tf || (ti == tf && fs[i].station < fs[fi].station)) fi = i;
    }

    const std::int64_t v = std::min({rs[ri].amount, fs[fi].amount, max_train});
    res.pairs.push_back({fs[fi].station, r, v});
    rs[ri].amount -= v;
    fs[fi].amount -= v;
    if (rs[ri].amount == 0) rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(ri));
    if (fs[fi].amount == 0) fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(fi));
  }

  for (const StationBalance& r : rs) res.diagnostics.unserved_deficit += r.amount;
  return res;
}

RelocatorMatch match_relocators(const std::vector<FeederRecipientPair>& pairs,
                                const std::vector<IdleRelocator>& idle,
                                const TravelTimeMatrix& times, std::int64_t now_s,
                                double approach_factor) {
  RelocatorMatch out;
  std::vector<char> pair_used(pairs.size(), 0);
  std::vector<char> op_used(idle.size(), 0);
  std::size_t pairs_left = pairs.size(), ops_left = idle.size();

  while (pairs_left > 0 && ops_left > 0) {
    std::size_t best = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pair_used[i]) continue;
      if (best == pairs.size()) {
        best = i;
        continue;
      }
      const FeederRecipientPair& a = pairs[i];
      const FeederRecipientPair& b = pairs[best];
      if (a.vehicles != b.vehicles) {
        if (a.vehicles > b.vehicles) best = i;
        continue;
      }
      const std::int64_t ta = times.at(a.feeder, a.recipient);
      const std::int64_t tb = times.at(b.feeder, b.recipient);
      if (ta != tb) {
        if (ta < tb) best = i;
        continue;
      }
      if (a.feeder != b.feeder ? a.feeder < b.feeder : a.recipient < b.recipient) best = i;
    }
    const FeederRecipientPair& p = pairs[best];

    std::size_t chosen = idle.size();
    std::int64_t chosen_route = 0;
    for (std::size_t o = 0; o < idle.size(); ++o) {
      if (op_used[o]) continue;
      const std::int64_t route = times.at(idle[o].station, p.feeder) + times.at(p.feeder, p.recipient);
      if (chosen == idle.size() || route < chosen_route ||
          (route == chosen_route && idle[o].id < idle[chosen].id)) {
        chosen = o;
        chosen_route = route;
      }
    }

    RelocationTask task;
    task.relocator = idle[chosen].id;
    task.feeder = p.feeder;
    task.recipient = p.recipient;
    task.vehicles = p.vehicles;
    task.depart_s = now_s;
    const double approach = static_cast<double>(times.at(idle[chosen].station, p.feeder)) * approach_factor;
    task.feeder_arrival_s = now_s + std::llround(approach);
    task.recipient_arrival_s = task.feeder_arrival_s + times.at(p.feeder, p.recipient);
    out.tasks.push_back(task);

    pair_used[best] = 1;
    op_used[chosen] = 1;
    --pairs_left;
    --ops_left;
  }

  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!pair_used[i]) out.backlog.push_back(pairs[i]);
  return out;
}

AutonomousDispatch autonomous_dispatch(const std::vector<FeederRecipientPair>& pairs,
                                       const std::vector<std::int64_t>& parked,
                                       const TravelTimeMatrix& times, std::int64_t now_s) {
  AutonomousDispatch out;
  std::vector<std::int64_t> avail(parked);
  for (const FeederRecipientPair& p : pairs) {
    const std::int64_t move = std::min(p.vehicles, std::max<std::int64_t>(0, avail[p.feeder]));
    out.shortfall_vehicles += p.vehicles - move;
    if (move <= 0) continue;
    avail[p.feeder] -= move;
    out.movements.push_back(
        {p.feeder, p.recipient, move, now_s, now_s + times.at(p.feeder, p.recipient)});
  }
  return out;
}

}  // namespace relosim
