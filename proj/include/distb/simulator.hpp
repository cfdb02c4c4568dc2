/*
 * Copyright 2026 The distb contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include <json.hpp>

#include "distb/calibration.hpp"
#include "distb/clustering.hpp"
#include "distb/ledger.hpp"
#include "distb/rng.hpp"
#include "distb/scenario.hpp"
#include "distb/sdn.hpp"

namespace distb::sim {

using sdn::Packet;
using sdn::SimTime;

enum class EventKind {
  packet_arrival,
  mine_tick,
  pending_sweep,
  detector_tick,
  attack_start,
  attack_stop,
  round_tick,
  measurement_tick,
};

const char* to_string(EventKind kind);

/// Where a packet is on its way to the base station.
enum class Stage : std::uint8_t { at_head, at_gateway, uplink_done };

struct Event {
  SimTime at = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::round_tick;
  Stage stage = Stage::at_gateway;
  std::int32_t gateway = 0;
  std::int32_t channel = 0;  // measurement_tick: 0 bandwidth, 1 cpu
  Packet packet;             // packet_arrival only
};

/// Min-queue on (at, seq). seq is assigned on push and never reused.
class EventQueue {
 public:
  void push(Event ev);
  Event pop();
  const Event& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t pushed() const { return next_seq_; }
  /// Packet events still queued (in flight at the horizon).
  std::size_t packets_queued() const { return packets_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  std::size_t packets_ = 0;
};

/// Seeded Poisson arrivals for every live node in [t0, t1). Members route via
/// their cluster head; the first hop is scheduled hop_delay plus transmission
/// time after creation. Events come back sorted by creation time with ids
/// starting at `next_id`.
std::vector<Event> generate_traffic(const topology::NodeSet& nodes,
                                    const clustering::ClusterSet& clusters, double rate_pps,
                                    SimTime t0, SimTime t1, const ScenarioConfig& cfg, Rng& rng,
                                    std::uint64_t& next_id);

/// Attacker k has id node_count + k and sends straight to gateway k % gateways
/// at multiplier x sensor rate (ramped if configured) inside [start, stop).
std::vector<Event> inject_attack(const ScenarioConfig& cfg, SimTime t0, SimTime t1, Rng& rng,
                                 std::uint64_t& next_id);

/// Per-attacker multiplier at time t (1 before the ramp completes start).
double attack_multiplier(const AttackConfig& attack, std::int32_t source, SimTime t);

struct Counters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;  // queue overflow plus blocked
  std::uint64_t in_flight = 0;
  std::uint64_t blocked = 0;  // subset of dropped: hit a drop rule
  std::uint64_t benign_generated = 0;
  std::uint64_t benign_delivered = 0;
  std::uint64_t benign_delivered_bytes = 0;
  std::uint64_t attack_generated = 0;
  std::uint64_t attack_delivered = 0;
  std::uint64_t attack_blocked = 0;
  std::uint64_t txs_admitted_valid = 0;
  std::uint64_t txs_parked = 0;
  std::uint64_t txs_promoted = 0;
  std::uint64_t txs_discarded = 0;
  std::uint64_t committed_txs = 0;
  std::uint64_t blocks = 0;  // excluding genesis
  std::int64_t gas_used = 0;
  std::int64_t rounds = 0;
  std::uint64_t events = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

struct Series2 {
  double x;
  double y;
  friend bool operator==(const Series2&, const Series2&) = default;
};

struct MetricsBundle {
  Mode mode = Mode::distb;
  std::vector<Series2> throughput;  // node_count -> kbps
  std::vector<Series2> bandwidth;   // attack arrival rate (thousand/s) -> Mbps
  std::vector<Series2> response;    // file Mb -> ms
  std::vector<Series2> gas;         // tx count -> gas
  std::vector<Series2> cpu;         // s -> percent
  Counters counters;
  bool terminated_early = false;  // network exhausted before sim_time
  SimTime ended_at = 0.0;
  bool chain_valid = true;
  std::size_t chain_height = 0;
  /// Source id -> time the drop rule went in.
  std::vector<std::pair<std::int64_t, SimTime>> blocked_at;
  /// Ledger export (distb mode only).
  std::vector<chain::Block> blocks;

  bool conserves_packets() const {
    return counters.generated == counters.delivered + counters.dropped + counters.in_flight;
  }
};

MetricsBundle run_scenario(const ScenarioConfig& cfg);

nlohmann::json to_json(const MetricsBundle& m);

// ---------------------------------------------------------------------------
// Sweeps. Each scenario instance runs on its own; results are merged in input
// order, so the output does not depend on the thread count.
// ---------------------------------------------------------------------------

struct Row {
  double x = 0.0;
  double distb = 0.0;
  double baseline = 0.0;
};

/// Runs fn(0..n-1) on up to `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

ScenarioConfig throughput_scenario(const ScenarioConfig& base, std::int64_t nodes, Mode mode);
ScenarioConfig bandwidth_scenario(const ScenarioConfig& base, double rate_kps, Mode mode);
ScenarioConfig cpu_scenario(const ScenarioConfig& base);

std::vector<Row> measure_throughput(const ScenarioConfig& base,
                                    const std::vector<std::int64_t>& node_counts,
                                    unsigned threads = 0);
std::vector<Row> measure_bandwidth_under_attack(const ScenarioConfig& base,
                                                const std::vector<double>& rates_kps,
                                                unsigned threads = 0);
std::vector<Row> measure_response_time(const calib::Calibration& calibration,
                                       const std::vector<double>& sizes_mb);
std::vector<Series2> measure_gas(const chain::GasModel& model,
                                 const std::vector<std::int64_t>& tx_counts);
std::vector<Series2> measure_cpu_flooding(const ScenarioConfig& base);

/// kappa that puts the flooding peak at `target_peak_pct` given cpu_idle_pct.
double fit_cpu_kappa(const ScenarioConfig& base, double target_peak_pct);

}  // namespace distb::sim
