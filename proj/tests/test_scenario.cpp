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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "distb/error.hpp"
#include "distb/scenario.hpp"

using namespace distb;
using namespace distb::sim;

namespace {

std::string config_error(const nlohmann::json& j) {
  try {
    parse_config_json(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  FAIL("config accepted: " << j.dump());
  return {};
}

bool mentions(const std::string& s, const std::string& what) {
  return s.find(what) != std::string::npos;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("empty object gives the setup defaults") {
    const auto c = parse_config_json(nlohmann::json::object());
    CHECK(c.node_count == 50);
    CHECK(c.sim_time_ms == 500000);
    CHECK(c.data_rate_mbps == 10);
    CHECK(c.controllers == 5);
    CHECK(c.gateways == 2);
    CHECK(c.area_side_m == 2500);
    CHECK(c.packet_size_min == 128);
    CHECK(c.packet_size_max == 1024);
    CHECK(c.consensus.kind == chain::Consensus::Kind::pow);
    CHECK(c.consensus.difficulty == 8);
    CHECK_FALSE(c.attack.has_value());
    CHECK(c.mode == Mode::distb);
  }

  TEST_CASE("out-of-range values name the field") {
    CHECK(mentions(config_error({{"node_count", -3}}), "node_count"));
    CHECK(mentions(config_error({{"controllers", 0}}), "controllers"));
    CHECK(mentions(config_error({{"packet_size_min", 2000}}), "packet_size"));
    CHECK(mentions(config_error({{"attack", {{"start_ms", 5000}, {"stop_ms", 100}}}}), "attack"));
    CHECK(mentions(config_error({{"mode", "sideways"}}), "mode"));
  }

  TEST_CASE("unknown keys are rejected by name, nested ones with their path") {
    CHECK(mentions(config_error({{"nodecount", 5}}), "nodecount"));
    CHECK(mentions(config_error({{"link", {{"queue", 1}}}}), "link.queue"));
  }

  TEST_CASE("wrong types are config errors") {
    config_error({{"node_count", "fifty"}});
    config_error(nlohmann::json::array());
  }

  TEST_CASE("attack and consensus blocks parse") {
    const auto c = parse_config_json({{"mode", "of-baseline"},
                                      {"attack", {{"start_ms", 500}, {"stop_ms", 2500}, {"sources", 2}}},
                                      {"consensus", {{"kind", "pos"}, {"stakes", {{"A", 3}, {"B", 1}}}}}});
    CHECK(c.mode == Mode::baseline);
    REQUIRE(c.attack);
    CHECK(c.attack->start_ms == 500);
    CHECK(c.attack->sources == 2);
    CHECK(c.consensus.kind == chain::Consensus::Kind::pos);
    CHECK(c.consensus.stakes.at("A") == 3);
  }

  TEST_CASE("to_json round trips") {
    auto c = parse_config_json({{"seed", 9}, {"attack", {{"multiplier", 4}}}});
    const auto again = parse_config_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(again.attack == c.attack);
  }

  TEST_CASE("missing file is an io error, bad JSON a config error") {
    try {
      parse_config("/nonexistent/distb.json");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::io);
    }
    const auto p = std::filesystem::temp_directory_path() / "distb-bad-config.json";
    std::ofstream(p) << "{ nope";
    try {
      parse_config(p.string());
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::config);
    }
    std::filesystem::remove(p);
  }

  TEST_CASE("DISTB_SEED overrides the configured seed") {
    ScenarioConfig c;
    c.seed = 3;
    ::setenv("DISTB_SEED", "1234", 1);
    apply_env_overrides(c);
    CHECK(c.seed == 1234);
    ::setenv("DISTB_SEED", "12x", 1);
    CHECK_THROWS_AS(apply_env_overrides(c), Error);
    ::unsetenv("DISTB_SEED");
    c.seed = 5;
    apply_env_overrides(c);
    CHECK(c.seed == 5);
  }
}
