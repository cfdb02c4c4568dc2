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
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace distb::sdn {

using SourceId = std::int64_t;
using EndpointId = std::int64_t;
using SimTime = double;  // simulated milliseconds

enum class PacketKind { sensor_data, file_chunk, attack };

const char* to_string(PacketKind kind);

struct Packet {
  std::uint64_t id = 0;
  SourceId src = 0;
  EndpointId dst = 0;
  std::int32_t size = 0;  // bytes
  PacketKind kind = PacketKind::sensor_data;
  SimTime created_at = 0.0;
};

/// Unset fields are wildcards.
struct Match {
  std::optional<SourceId> src;
  std::optional<EndpointId> dst;
  std::optional<PacketKind> kind;

  bool matches(const Packet& pkt) const;
  friend bool operator==(const Match&, const Match&) = default;
};

struct Forward {
  EndpointId next_hop = 0;
  friend bool operator==(const Forward&, const Forward&) = default;
};
struct Drop {
  friend bool operator==(const Drop&, const Drop&) = default;
};
struct ToController {
  friend bool operator==(const ToController&, const ToController&) = default;
};

using Action = std::variant<Forward, Drop, ToController>;

struct FlowRule {
  Match match;
  Action action;
  std::int32_t priority = 0;
  SimTime installed_at = 0.0;

  /// Same match, action and priority; install time is not part of identity.
  bool same_rule(const FlowRule& other) const;
};

struct FlowTable {
  std::vector<FlowRule> rules;
  Action default_action = ToController{};
};

/// Highest priority wins; ties go to the earliest installed_at and then to the
/// earliest position in the table. No match yields the default action.
Action match_packet(const FlowTable& table, const Packet& pkt);

/// Sliding per-source arrival log. The simulator records every packet that
/// reaches a controller and evicts entries as its clock advances.
class TrafficWindow {
 public:
  void record(SourceId src, SimTime at);
  /// Drop entries at or before `horizon` (i.e. outside (horizon, now]).
  void evict_through(SimTime horizon);
  /// Packets from `src` with arrival time in (now - window, now].
  std::size_t count(SourceId src, SimTime now, SimTime window) const;
  std::vector<SourceId> sources() const;

 private:
  std::map<SourceId, std::deque<SimTime>> arrivals_;
};

struct DetectorConfig {
  SimTime window_ms = 200.0;
  /// Flag when the window count is strictly greater than this.
  double threshold = 20.0;
};

/// theta = max(min_threshold, factor * per-source rate * window).
double flood_threshold(double sensor_rate_pps, SimTime window_ms, double factor = 5.0,
                       double min_threshold = 10.0);

struct ControllerState {
  std::int32_t id = 0;
  FlowTable flow_table;
  TrafficWindow traffic_window;
  std::set<SourceId> blocked;
};

constexpr std::int32_t kBlockPriority = 0x7fffffff;

// In-place forms used by the event loop.
void install_rule(ControllerState& ctrl, FlowRule rule, SimTime now);
void block_source(ControllerState& ctrl, SourceId src, SimTime now);

/// Returns a copy with `rule` appended (installed_at = now); an identical rule
/// already present makes this a no-op.
ControllerState install_flow_rule(ControllerState ctrl, FlowRule rule, SimTime now);

/// Sources whose count over the last window exceeds the threshold, by id.
std::vector<SourceId> detect_flood(const ControllerState& ctrl, SimTime now,
                                   const DetectorConfig& cfg);

/// Adds `src` to the blocked set and installs a maximal-priority drop rule.
ControllerState block_flow(ControllerState ctrl, SourceId src, SimTime now);

/// Controller responsible for a source (hash partition).
std::int32_t controller_for(SourceId src, std::int32_t controllers);

nlohmann::json to_json(const FlowTable& table);

}  // namespace distb::sdn
