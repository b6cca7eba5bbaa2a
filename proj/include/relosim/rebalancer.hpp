// Relocation planning: interval balance estimation, feeder/recipient
// classification and matching, relocator assignment, and the autonomous
// per-vehicle dispatch variant.
#pragma once

#include <cstdint>
#include <vector>

#include "relosim/types.hpp"

namespace relosim {

enum class ControlPolicy {
  zero,              // v_control_i = 0 everywhere
  conservative_one,  // v_control_i = 1 where the station can spare it
};

// A vehicle (or train) already on its way to a station.
struct PendingArrival {
  StationId station = 0;
  std::int64_t time_s = 0;
  std::int64_t vehicles = 1;
};

// Per-interval balance decomposition. For every station:
//   balance = parked + expected_dropoffs - expected_pickups - control.
struct BalanceSnapshot {
  std::int64_t interval_start_s = 0;
  std::int64_t interval_len_s = 0;
  std::vector<std::int64_t> parked;
  std::vector<std::int64_t> expected_dropoffs;
  std::vector<std::int64_t> expected_pickups;
  std::vector<std::int64_t> control;
  std::vector<std::int64_t> balance;
};

struct StationBalance {
  StationId station = 0;
  std::int64_t amount = 0;  // excess for feeders, deficit (> 0) for recipients
};

struct MatchingDiagnostics {
  std::int64_t v_excess = 0;
  std::int64_t v_deficit = 0;
  bool feasible = true;  // v_excess >= v_deficit
  std::int64_t unserved_deficit = 0;
};

struct Classification {
  std::vector<StationBalance> feeders;     // surplus, descending, id ties first
  std::vector<StationBalance> recipients;  // deficit, descending, id ties first
  MatchingDiagnostics diagnostics;         // unserved filled by matching
};

struct FeederRecipientPair {
  StationId feeder = 0;
  StationId recipient = 0;
  std::int64_t vehicles = 0;
};

struct MatchResult {
  std::vector<FeederRecipientPair> pairs;
  MatchingDiagnostics diagnostics;
};

struct IdleRelocator {
  std::int64_t id = 0;
  StationId station = 0;
};

struct RelocationTask {
  std::int64_t relocator = 0;
  StationId feeder = 0;
  StationId recipient = 0;
  std::int64_t vehicles = 0;
  std::int64_t depart_s = 0;
  std::int64_t feeder_arrival_s = 0;
  std::int64_t recipient_arrival_s = 0;
};

struct RelocatorMatch {
  std::vector<RelocationTask> tasks;
  std::vector<FeederRecipientPair> backlog;  // pairs left without a relocator
};

struct VehicleMovement {
  StationId from = 0;
  StationId to = 0;
  std::int64_t vehicles = 0;
  std::int64_t depart_s = 0;
  std::int64_t arrival_s = 0;
};

struct AutonomousDispatch {
  std::vector<VehicleMovement> movements;
  std::int64_t shortfall_vehicles = 0;  // planned - actually parked
};

// Effectively unlimited train size for the autonomous strategy.
inline constexpr std::int64_t kUnboundedTrain = INT64_C(1) << 40;

// Balance for interval k (window [k*len, (k+1)*len)). Dropoffs counted are
// pending arrivals landing in the window plus trace trips requested in the
// window that also complete in it; pickups counted are trace trips requested
// in the window. Trips requested earlier are already realized (served trips
// appear via `pending`; rejected ones are gone).
BalanceSnapshot compute_balance(const std::vector<std::int64_t>& parked,
                                const std::vector<PendingArrival>& pending,
                                const DemandTrace& trace, std::int64_t k,
                                std::int64_t interval_len_s, ControlPolicy policy);

// Feeders: balance > 0, most surplus first. Recipients: balance < 0, largest
// deficit first. Ties by station id.
Classification classify_stations(const BalanceSnapshot& snapshot);

// Repeatedly pair the neediest recipient with the richest feeder (feeder ties
// by travel time to that recipient, then id) moving
// min(deficit, excess, max_train) vehicles; the same station pair can recur.
MatchResult match_feeders_recipients(const std::vector<StationBalance>& feeders,
                                     const std::vector<StationBalance>& recipients,
                                     std::int64_t max_train, const TravelTimeMatrix& times);

// Greedy assignment: biggest pair first (ties: shorter feeder->recipient leg,
// then feeder id, recipient id), relocator with the shortest total route
// (ties: smaller id). approach_factor scales only the scheduled
// relocator->feeder leg (walking/cycling approach); selection always compares
// driving times.
RelocatorMatch match_relocators(const std::vector<FeederRecipientPair>& pairs,
                                const std::vector<IdleRelocator>& idle,
                                const TravelTimeMatrix& times, std::int64_t now_s,
                                double approach_factor = 1.0);

// Self-driving execution: one movement per pair, clamped to what is actually
// parked at the feeder as pairs are processed in order.
AutonomousDispatch autonomous_dispatch(const std::vector<FeederRecipientPair>& pairs,
                                       const std::vector<std::int64_t>& parked,
                                       const TravelTimeMatrix& times, std::int64_t now_s);

}  // namespace relosim
