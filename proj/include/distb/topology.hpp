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
#include <vector>

#include <json.hpp>

namespace distb::topology {

using NodeId = std::int64_t;

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Node {
  NodeId id = 0;
  Point3 location;
  double energy = 0.0;  // joules
  double area = 0.0;    // coverage radius, meters
  bool head = false;
  bool member = false;
  double dist_bs = 0.0;

  bool depleted() const { return energy <= 0.0; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct BaseStation {
  Point3 location;

  friend bool operator==(const BaseStation&, const BaseStation&) = default;
};

/// Canonical iteration order for every algorithm is the order of `nodes`.
struct NodeSet {
  std::vector<Node> nodes;
  BaseStation base_station;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;
};

/// Ranges for the random placement law. The square side comes from the
/// scenario; building height and energy ranges are configurable here.
struct PlacementConfig {
  double building_height = 30.0;
  double energy_min = 50.0;
  double energy_max = 100.0;
  double radius_min = 100.0;
  double radius_max = 400.0;
  /// Base station position; negative coordinates mean "centre of footprint".
  Point3 base_station{-1.0, -1.0, 0.0};
};

/// Per-round energy charges: a head pays head_cost + tx_cost * members,
/// a member pays tx_cost.
struct EnergyCosts {
  double head_cost = 1.0;
  double tx_cost = 0.2;
};

/// Euclidean distance in 3D. Throws invalid_argument on non-finite input.
double distance(const Point3& p, const Point3& q);

NodeSet generate_topology(std::int64_t n, double area_side, std::uint64_t seed,
                          const PlacementConfig& cfg = {});

/// energy' = max(0, energy - cost). Negative cost is an invalid_argument.
Node decay_energy(Node node, double cost);

/// Recompute dist_bs for every node.
void refresh_distances(NodeSet& set);

double total_energy(const NodeSet& set);

void to_json(nlohmann::json& j, const Node& node);
void from_json(const nlohmann::json& j, Node& node);
nlohmann::json node_set_to_json(const NodeSet& set);
NodeSet node_set_from_json(const nlohmann::json& j);

}  // namespace distb::topology
