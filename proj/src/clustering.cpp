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

#include "distb/clustering.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "distb/error.hpp"

namespace distb::clustering {

using topology::Node;

std::size_t ClusterSet::node_count() const {
  std::size_t total = 0;
  for (const auto& c : clusters) total += 1 + c.member_ids.size();
  return total;
}

NodeId ClusterSet::head_of(NodeId id) const {
  for (const auto& c : clusters) {
    if (c.head_id == id) return id;
    if (std::find(c.member_ids.begin(), c.member_ids.end(), id) != c.member_ids.end()) {
      return c.head_id;
    }
  }
  return -1;
}

NodeSet sort_nodes(NodeSet nodes) {
  std::stable_sort(nodes.nodes.begin(), nodes.nodes.end(), [](const Node& a, const Node& b) {
    if (a.energy != b.energy) return a.energy > b.energy;
    if (a.dist_bs != b.dist_bs) return a.dist_bs < b.dist_bs;
    return a.id < b.id;
  });
  return nodes;
}

ClusterSet select_cluster_heads(NodeSet& nodes) {
  if (nodes.nodes.empty()) {
    throw Error(ErrorCode::invalid_argument, "select_cluster_heads: empty node set");
  }
  for (auto& node : nodes.nodes) {
    if (node.depleted()) {
      throw Error(ErrorCode::invalid_argument,
                  "select_cluster_heads: node " + std::to_string(node.id) + " is depleted");
    }
    node.head = false;
    node.member = false;
  }

  ClusterSet out;
  auto& s = nodes.nodes;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].head || s[i].member) continue;
    s[i].head = true;
    Cluster cluster{s[i].id, {}};
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[j].head || s[j].member) continue;
      if (s[i].area > topology::distance(s[i].location, s[j].location)) {
        s[j].member = true;
        cluster.member_ids.push_back(s[j].id);
      }
    }
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

ClusterSet select_cluster_heads(const NodeSet& nodes) {
  NodeSet copy = nodes;
  return select_cluster_heads(copy);
}

RoundResult run_round(const NodeSet& nodes, const topology::EnergyCosts& costs,
                      std::int64_t previous_round) {
  NodeSet live;
  live.base_station = nodes.base_station;
  for (const auto& node : nodes.nodes) {
    if (!node.depleted()) live.nodes.push_back(node);
  }
  if (live.nodes.empty()) {
    throw Error(ErrorCode::exhausted_network, "run_round: every node is depleted");
  }
  topology::refresh_distances(live);
  live = sort_nodes(std::move(live));

  RoundResult result;
  result.clusters = select_cluster_heads(live);
  result.clusters.round = previous_round + 1;

  std::unordered_map<NodeId, double> charge;
  for (const auto& c : result.clusters.clusters) {
    charge[c.head_id] = costs.head_cost + costs.tx_cost * static_cast<double>(c.member_ids.size());
    for (NodeId m : c.member_ids) charge[m] = costs.tx_cost;
  }
  std::unordered_map<NodeId, const Node*> elected;
  for (const auto& node : live.nodes) elected[node.id] = &node;

  result.nodes.base_station = nodes.base_station;
  result.nodes.nodes.reserve(nodes.nodes.size());
  for (const auto& original : nodes.nodes) {
    auto it = elected.find(original.id);
    if (it == elected.end()) {
      Node idle = original;
      idle.head = false;
      idle.member = false;
      result.nodes.nodes.push_back(idle);
      continue;
    }
    result.nodes.nodes.push_back(topology::decay_energy(*it->second, charge.at(original.id)));
  }
  topology::refresh_distances(result.nodes);
  return result;
}

nlohmann::json to_json(const ClusterSet& set) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : set.clusters) {
    clusters.push_back({{"head", c.head_id}, {"members", c.member_ids}});
  }
  return {{"round", set.round}, {"clusters", std::move(clusters)}};
}

}  // namespace distb::clustering
