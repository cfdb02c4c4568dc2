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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "distb/clustering.hpp"
#include "distb/error.hpp"
#include "distb/rng.hpp"
#include "oracles.hpp"

using namespace distb;
using namespace distb::clustering;
using topology::Node;

namespace {

Node at(NodeId id, double x, double y, double energy, double area) {
  Node n;
  n.id = id;
  n.location = {x, y, 0};
  n.energy = energy;
  n.area = area;
  return n;
}

NodeSet fixture(std::vector<Node> nodes) {
  NodeSet s;
  s.base_station.location = {0, 0, 0};
  s.nodes = std::move(nodes);
  topology::refresh_distances(s);
  return s;
}

std::vector<oracle::OracleCluster> as_oracle(const ClusterSet& cs) {
  std::vector<oracle::OracleCluster> out;
  for (const auto& c : cs.clusters) out.push_back({c.head_id, c.member_ids});
  return out;
}

std::vector<NodeId> ids(const NodeSet& s) {
  std::vector<NodeId> out;
  for (const auto& n : s.nodes) out.push_back(n.id);
  return out;
}

}  // namespace

TEST_SUITE("clustering") {
  TEST_CASE("composite key orders energy, then distance, then id") {
    // energies [5,9,9], dist_bs [10,30,20] -> c, b, a
    auto s = fixture({at(0, 10, 0, 5, 100), at(1, 30, 0, 9, 100), at(2, 20, 0, 9, 100)});
    CHECK(ids(sort_nodes(s)) == std::vector<NodeId>{2, 1, 0});
  }

  TEST_CASE("ids break exact ties") {
    auto s = fixture({at(7, 0, 10, 5, 100), at(3, 10, 0, 5, 100)});
    CHECK(ids(sort_nodes(s)) == std::vector<NodeId>{3, 7});
  }

  TEST_CASE("sort agrees with the exhaustive oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      auto s = topology::generate_topology(10, 300, static_cast<std::uint64_t>(trial));
      // coarse energies force ties so the distance and id keys matter
      for (auto& n : s.nodes) n.energy = static_cast<double>(rng.uniform_int(1, 3));
      CHECK(ids(sort_nodes(s)) == oracle::sorted_ids(s));
    }
  }

  TEST_CASE("single node is its own head") {
    auto s = fixture({at(4, 1, 1, 10, 50)});
    const auto cs = select_cluster_heads(s);
    REQUIRE(cs.clusters.size() == 1);
    CHECK(cs.clusters[0].head_id == 4);
    CHECK(cs.clusters[0].member_ids.empty());
  }

  TEST_CASE("nodes out of each other's reach stay separate") {
    auto s = sort_nodes(fixture({at(0, 0, 0, 10, 50), at(1, 500, 0, 9, 50)}));
    const auto cs = select_cluster_heads(s);
    CHECK(cs.clusters.size() == 2);
  }

  TEST_CASE("membership needs strictly less than the radius") {
    auto s = sort_nodes(fixture({at(0, 0, 0, 10, 100), at(1, 100, 0, 9, 50)}));
    CHECK(select_cluster_heads(s).clusters.size() == 2);
    auto t = sort_nodes(fixture({at(0, 0, 0, 10, 100.0001), at(1, 100, 0, 9, 50)}));
    CHECK(select_cluster_heads(t).clusters.size() == 1);
  }

  TEST_CASE("five-node fixture matches a hand execution") {
    // Sorted: 2(e9) 0(e8) 4(e7) 1(e6) 3(e5).
    // 2 at (0,0) r=120 takes 1 (d=100); 0 at (300,0) r=90 takes 3 (d=80); 4 at (1000,0) alone.
    auto s = sort_nodes(fixture({at(0, 300, 0, 8, 90), at(1, 100, 0, 6, 50), at(2, 0, 0, 9, 120),
                                 at(3, 380, 0, 5, 400), at(4, 1000, 0, 7, 200)}));
    const auto cs = select_cluster_heads(s);
    const std::vector<oracle::OracleCluster> expected{{2, {1}}, {0, {3}}, {4, {}}};
    CHECK(as_oracle(cs) == expected);
    CHECK(as_oracle(cs) == oracle::cluster_heads(s));
  }

  TEST_CASE("first-wins: a node covered by two heads joins the earlier one") {
    auto s = sort_nodes(fixture({at(0, 0, 0, 10, 150), at(1, 200, 0, 9, 150), at(2, 100, 0, 1, 10)}));
    const auto cs = select_cluster_heads(s);
    CHECK(cs.head_of(2) == 0);
  }

  TEST_CASE("select_cluster_heads matches the oracle on random sets") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      Rng rng(seed);
      const auto n = rng.uniform_int(1, 12);
      auto s = topology::generate_topology(n, rng.uniform(150, 1500), seed);
      auto sorted = sort_nodes(s);
      CHECK(as_oracle(select_cluster_heads(sorted)) == oracle::cluster_heads(s));
    }
  }

  TEST_CASE("partition, coverage and head dominance") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto s = sort_nodes(topology::generate_topology(60, 1200, seed));
      const auto cs = select_cluster_heads(s);
      std::map<NodeId, const Node*> by_id;
      for (const auto& n : s.nodes) by_id[n.id] = &n;
      std::set<NodeId> seen;
      for (const auto& c : cs.clusters) {
        CHECK(seen.insert(c.head_id).second);
        for (auto m : c.member_ids) {
          CHECK(seen.insert(m).second);
          CHECK(topology::distance(by_id[c.head_id]->location, by_id[m]->location) < by_id[c.head_id]->area);
          CHECK(by_id[c.head_id]->energy >= by_id[m]->energy);
        }
      }
      CHECK(seen.size() == s.nodes.size());
      CHECK(cs.clusters.front().head_id == s.nodes.front().id);
      for (const auto& n : s.nodes) CHECK_FALSE((n.head && n.member));
    }
  }

  TEST_CASE("empty or depleted input is rejected") {
    NodeSet empty;
    CHECK_THROWS_AS(select_cluster_heads(empty), Error);
    auto s = fixture({at(0, 0, 0, 0.0, 100)});
    CHECK_THROWS_AS(select_cluster_heads(s), Error);
  }

  TEST_CASE("a round with ample energy elects the same heads as a bare selection") {
    auto s = topology::generate_topology(30, 1000, 4);
    for (auto& n : s.nodes) n.energy *= 1e9;
    const auto rr = run_round(s, {}, 0);
    auto sorted = sort_nodes(s);
    const auto bare = select_cluster_heads(sorted);
    CHECK(rr.clusters.clusters == bare.clusters);
    CHECK(rr.clusters.round == 1);
    CHECK(ids(rr.nodes) == ids(s));
  }

  TEST_CASE("network energy falls every round until exhaustion") {
    auto s = topology::generate_topology(15, 600, 8);
    for (auto& n : s.nodes) n.energy = 5.0 + static_cast<double>(n.id % 3);
    std::int64_t round = 0;
    double prev = topology::total_energy(s);
    for (;;) {
      RoundResult rr;
      try {
        rr = run_round(s, {}, round);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::exhausted_network);
        break;
      }
      round = rr.clusters.round;
      const double now = topology::total_energy(rr.nodes);
      CHECK(now < prev);
      for (const auto& n : rr.nodes.nodes) CHECK(n.energy >= 0.0);
      prev = now;
      s = rr.nodes;
      REQUIRE(round < 1000);
    }
    CHECK(topology::total_energy(s) == 0.0);
  }

  TEST_CASE("lifetime matches a step-by-step energy ledger") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto s = topology::generate_topology(20, 900, seed);
      for (auto& n : s.nodes) n.energy = std::floor(n.energy / 10.0);
      const int expected = oracle::rounds_until_first_depletion(s, 1.0, 0.2);
      int lifetime = 0;
      std::int64_t round = 0;
      for (;;) {
        const auto rr = run_round(s, {1.0, 0.2}, round);
        round = rr.clusters.round;
        s = rr.nodes;
        if (std::any_of(s.nodes.begin(), s.nodes.end(), [](const Node& n) { return n.depleted(); })) {
          lifetime = static_cast<int>(round);
          break;
        }
      }
      CHECK(lifetime == expected);
    }
  }

  TEST_CASE("depleted nodes sit out later rounds") {
    auto s = fixture({at(0, 0, 0, 1.0, 100), at(1, 50, 0, 0.5, 100), at(2, 5000, 0, 50, 100)});
    auto rr = run_round(s, {1.0, 0.2}, 0);
    rr = run_round(rr.nodes, {1.0, 0.2}, rr.clusters.round);
    CHECK(rr.clusters.node_count() < 3);
    CHECK(rr.clusters.head_of(0) == -1);
  }

  TEST_CASE("JSON form lists heads and members in order") {
    auto s = sort_nodes(fixture({at(0, 0, 0, 10, 150), at(1, 100, 0, 9, 10)}));
    auto cs = select_cluster_heads(s);
    cs.round = 3;
    CHECK(to_json(cs).dump() == R"({"clusters":[{"head":0,"members":[1]}],"round":3})");
  }
}
