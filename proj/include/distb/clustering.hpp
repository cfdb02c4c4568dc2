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

#include "distb/topology.hpp"

namespace distb::clustering {

using topology::NodeId;
using topology::NodeSet;

struct Cluster {
  NodeId head_id = 0;
  std::vector<NodeId> member_ids;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct ClusterSet {
  std::vector<Cluster> clusters;
  std::int64_t round = 0;

  std::size_t node_count() const;
  /// Head of the cluster that contains `id`, or -1 when the node is absent.
  NodeId head_of(NodeId id) const;

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

/// Orders nodes by energy (descending), then dist_bs (ascending), then id.
/// The alternative of two successive sorts (energy, then distance) would leave
/// only the distance order in effect, so a single composite key is used.
NodeSet sort_nodes(NodeSet nodes);

/// Single pass over an already sorted set: the first node that is neither a
/// head nor a member becomes a head and adopts every later unassigned node
/// strictly inside its coverage radius. Head/member flags in `nodes` are
/// rewritten. Throws invalid_argument for an empty set or a depleted node.
ClusterSet select_cluster_heads(NodeSet& nodes);

/// Convenience overload for callers that only need the clusters.
ClusterSet select_cluster_heads(const NodeSet& nodes);

struct RoundResult {
  ClusterSet clusters;
  NodeSet nodes;  // input order, energies charged, flags from this round
};

/// One clustering epoch: refresh distances, drop depleted nodes, sort, elect,
/// then charge energy. Throws exhausted_network when every node is depleted.
RoundResult run_round(const NodeSet& nodes, const topology::EnergyCosts& costs,
                      std::int64_t previous_round = 0);

nlohmann::json to_json(const ClusterSet& set);

}  // namespace distb::clustering
