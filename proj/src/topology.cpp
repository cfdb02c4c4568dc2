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

#include "distb/topology.hpp"

#include <cmath>
#include <numeric>
#include <string>


#include "distb/error.hpp"
#include "distb/rng.hpp"

namespace distb::topology {

namespace {

bool finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

double distance(const Point3& p, const Point3& q) {
  if (!finite(p) || !finite(q)) {
    throw Error(ErrorCode::invalid_argument, "distance: non-finite coordinate");
  }
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

NodeSet generate_topology(std::int64_t n, double area_side, std::uint64_t seed,
                          const PlacementConfig& cfg) {
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument,
                "generate_topology: node count must be >= 1, got " + std::to_string(n));
  }
  if (!(area_side > 0.0) || !std::isfinite(area_side)) {
    throw Error(ErrorCode::invalid_argument, "generate_topology: area_side must be > 0");
  }

  NodeSet set;
  set.base_station.location = cfg.base_station;
  if (set.base_station.location.x < 0.0) set.base_station.location.x = area_side / 2.0;
  if (set.base_station.location.y < 0.0) set.base_station.location.y = area_side / 2.0;
  if (set.base_station.location.z < 0.0) set.base_station.location.z = 0.0;

  Rng rng(mix_seed(seed, 0x70706f6cULL));
  set.nodes.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Node node;
    node.id = i;
    node.location.x = rng.uniform(0.0, area_side);
    node.location.y = rng.uniform(0.0, area_side);
    node.location.z = rng.uniform(0.0, cfg.building_height);
    node.energy = rng.uniform(cfg.energy_min, cfg.energy_max);
    node.area = rng.uniform(cfg.radius_min, cfg.radius_max);
    set.nodes.push_back(node);
  }
  refresh_distances(set);
  return set;
}

Node decay_energy(Node node, double cost) {
  if (cost < 0.0 || !std::isfinite(cost)) {
    throw Error(ErrorCode::invalid_argument, "decay_energy: cost must be a finite value >= 0");
  }
  node.energy = std::max(0.0, node.energy - cost);
  return node;
}

void refresh_distances(NodeSet& set) {
  for (auto& node : set.nodes) {
    node.dist_bs = distance(node.location, set.base_station.location);
  }
}

double total_energy(const NodeSet& set) {
  return std::accumulate(set.nodes.begin(), set.nodes.end(), 0.0,
                         [](double acc, const Node& n) { return acc + n.energy; });
}

void to_json(nlohmann::json& j, const Node& node) {
  j = nlohmann::json{{"id", node.id},         {"x", node.location.x},
                     {"y", node.location.y},   {"z", node.location.z},
                     {"energy", node.energy}, {"area", node.area}};
}

void from_json(const nlohmann::json& j, Node& node) {
  node = Node{};
  node.id = j.at("id").get<NodeId>();
  node.location = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
  node.energy = j.at("energy").get<double>();
  node.area = j.at("area").get<double>();
  if (node.energy < 0.0 || !(node.area > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "node " + std::to_string(node.id) + ": energy must be >= 0 and area > 0");
  }
}

nlohmann::json node_set_to_json(const NodeSet& set) {
  const auto& bs = set.base_station.location;
  return {{"base_station", {{"x", bs.x}, {"y", bs.y}, {"z", bs.z}}}, {"nodes", set.nodes}};
}

NodeSet node_set_from_json(const nlohmann::json& j) {
  NodeSet set;
  if (j.contains("base_station")) {
    const auto& bs = j.at("base_station");
    set.base_station.location = {bs.at("x").get<double>(), bs.at("y").get<double>(),
                                 bs.at("z").get<double>()};
  }
  set.nodes = j.at("nodes").get<std::vector<Node>>();
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    for (std::size_t k = i + 1; k < set.nodes.size(); ++k) {
      if (set.nodes[i].id == set.nodes[k].id) {
        throw Error(ErrorCode::invalid_argument,
                    "duplicate node id " + std::to_string(set.nodes[i].id));
      }
    }
  }
  refresh_distances(set);
  return set;
}

}  // namespace distb::topology
