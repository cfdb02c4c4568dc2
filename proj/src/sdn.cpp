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

#include "distb/sdn.hpp"

#include <algorithm>

#include "distb/rng.hpp"

namespace distb::sdn {

const char* to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::sensor_data: return "sensor-data";
    case PacketKind::file_chunk: return "file-chunk";
    case PacketKind::attack: return "attack";
  }
  return "?";
}

bool Match::matches(const Packet& pkt) const {
  if (src && *src != pkt.src) return false;
  if (dst && *dst != pkt.dst) return false;
  if (kind && *kind != pkt.kind) return false;
  return true;
}

bool FlowRule::same_rule(const FlowRule& other) const {
  return match == other.match && action == other.action && priority == other.priority;
}

Action match_packet(const FlowTable& table, const Packet& pkt) {
  const FlowRule* best = nullptr;
  for (const auto& rule : table.rules) {
    if (!rule.match.matches(pkt)) continue;
    // strict comparisons keep the earliest position on full ties
    if (best == nullptr || rule.priority > best->priority ||
        (rule.priority == best->priority && rule.installed_at < best->installed_at)) {
      best = &rule;
    }
  }
  return best ? best->action : table.default_action;
}

void TrafficWindow::record(SourceId src, SimTime at) { arrivals_[src].push_back(at); }

void TrafficWindow::evict_through(SimTime horizon) {
  for (auto it = arrivals_.begin(); it != arrivals_.end();) {
    auto& q = it->second;
    while (!q.empty() && q.front() <= horizon) q.pop_front();
    it = q.empty() ? arrivals_.erase(it) : std::next(it);
  }
}

std::size_t TrafficWindow::count(SourceId src, SimTime now, SimTime window) const {
  auto it = arrivals_.find(src);
  if (it == arrivals_.end()) return 0;
  const auto& q = it->second;
  const SimTime lo = now - window;
  auto first = std::upper_bound(q.begin(), q.end(), lo);
  auto last = std::upper_bound(q.begin(), q.end(), now);
  return static_cast<std::size_t>(std::distance(first, last));
}

std::vector<SourceId> TrafficWindow::sources() const {
  std::vector<SourceId> out;
  out.reserve(arrivals_.size());
  for (const auto& [src, q] : arrivals_) out.push_back(src);
  return out;
}

double flood_threshold(double sensor_rate_pps, SimTime window_ms, double factor,
                       double min_threshold) {
  return std::max(min_threshold, factor * sensor_rate_pps * window_ms / 1000.0);
}

void install_rule(ControllerState& ctrl, FlowRule rule, SimTime now) {
  for (const auto& existing : ctrl.flow_table.rules) {
    if (existing.same_rule(rule)) return;
  }
  rule.installed_at = now;
  ctrl.flow_table.rules.push_back(std::move(rule));
}

void block_source(ControllerState& ctrl, SourceId src, SimTime now) {
  ctrl.blocked.insert(src);
  FlowRule rule;
  rule.match.src = src;
  rule.action = Drop{};
  rule.priority = kBlockPriority;
  install_rule(ctrl, std::move(rule), now);
}

ControllerState install_flow_rule(ControllerState ctrl, FlowRule rule, SimTime now) {
  install_rule(ctrl, std::move(rule), now);
  return ctrl;
}

std::vector<SourceId> detect_flood(const ControllerState& ctrl, SimTime now,
                                   const DetectorConfig& cfg) {
  std::vector<SourceId> suspects;
  for (SourceId src : ctrl.traffic_window.sources()) {
    const auto n = ctrl.traffic_window.count(src, now, cfg.window_ms);
    if (static_cast<double>(n) > cfg.threshold) suspects.push_back(src);
  }
  return suspects;
}

ControllerState block_flow(ControllerState ctrl, SourceId src, SimTime now) {
  block_source(ctrl, src, now);
  return ctrl;
}

std::int32_t controller_for(SourceId src, std::int32_t controllers) {
  return static_cast<std::int32_t>(splitmix64(static_cast<std::uint64_t>(src)) %
                                   static_cast<std::uint64_t>(controllers));
}

namespace {

nlohmann::json action_json(const Action& action) {
  if (const auto* f = std::get_if<Forward>(&action)) {
    return {{"type", "forward"}, {"next_hop", f->next_hop}};
  }
  if (std::holds_alternative<Drop>(action)) return {{"type", "drop"}};
  return {{"type", "to-controller"}};
}

}  // namespace

nlohmann::json to_json(const FlowTable& table) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : table.rules) {
    nlohmann::json match = nlohmann::json::object();
    if (r.match.src) match["src"] = *r.match.src;
    if (r.match.dst) match["dst"] = *r.match.dst;
    if (r.match.kind) match["kind"] = to_string(*r.match.kind);
    rules.push_back({{"match", match},
                     {"action", action_json(r.action)},
                     {"priority", r.priority},
                     {"installed_at_ms", r.installed_at}});
  }
  return {{"rules", rules}, {"default_action", action_json(table.default_action)}};
}

}  // namespace distb::sdn
