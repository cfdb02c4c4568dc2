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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "distb/blockchain.hpp"
#include "distb/calibration.hpp"
#include "distb/topology.hpp"

namespace distb::sim {

enum class Mode { distb, baseline };

const char* to_string(Mode mode);

struct AttackConfig {
  double start_ms = 1000.0;
  double stop_ms = 21000.0;
  std::int32_t sources = 4;
  double multiplier = 10.0;
  // Optional per-source linear ramp from 1x up to `multiplier`. Source k of S
  // reaches full rate after ramp_min + (ramp_max - ramp_min) * k / (S - 1).
  double ramp_min_ms = 0.0;
  double ramp_max_ms = 0.0;

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

struct DetectorSettings {
  double window_ms = 200.0;
  double threshold_factor = 5.0;
  double min_threshold = 10.0;
  double period_ms = 20.0;

  friend bool operator==(const DetectorSettings&, const DetectorSettings&) = default;
};

struct ChainSettings {
  std::int32_t batch_size = 8;
  double block_interval_ms = 1000.0;
  double pending_timeout_ms = 30000.0;
  double sweep_period_ms = 1000.0;
  // The first `unregistered_sensors` node ids start outside the contract's
  // registry; they join at register_after_ms (negative: never).
  std::int32_t unregistered_sensors = 0;
  double register_after_ms = -1.0;

  friend bool operator==(const ChainSettings&, const ChainSettings&) = default;
};

struct LinkSettings {
  std::int64_t queue_limit_bytes = 16384;
  double hop_delay_ms = 2.0;

  friend bool operator==(const LinkSettings&, const LinkSettings&) = default;
};

struct ScenarioConfig {
  Mode mode = Mode::distb;
  std::int64_t node_count = 50;
  double area_side_m = 2500.0;
  std::uint64_t seed = 1;
  double data_rate_mbps = 10.0;
  std::int32_t packet_size_min = 128;
  std::int32_t packet_size_max = 1024;
  double sim_time_ms = 500000.0;
  std::int32_t controllers = 5;
  std::int32_t gateways = 2;
  double sensor_rate_pps = 20.0;
  double round_period_ms = 20000.0;
  double measurement_period_ms = 100.0;
  double cpu_sample_ms = 200.0;
  std::optional<AttackConfig> attack;
  chain::Consensus consensus = chain::Consensus::pow(8);
  std::vector<double> file_sizes_mb{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  std::vector<std::int64_t> gas_tx_counts{3, 6, 9, 12, 15, 18, 21, 24};
  DetectorSettings detector;
  ChainSettings chain;
  topology::PlacementConfig placement;
  topology::EnergyCosts energy;
  LinkSettings link;
  calib::Calibration calibration = calib::default_calibration();
};

/// Throws Error(config) naming the offending field and bound.
void validate(const ScenarioConfig& cfg);

/// Absent keys keep the defaults; unknown keys are rejected.
ScenarioConfig parse_config_json(const nlohmann::json& j);
/// Reads a JSON file. Missing or unreadable file -> Error(io); malformed JSON
/// or bad values -> Error(config).
ScenarioConfig parse_config(const std::string& path);
/// Applies DISTB_SEED when set.
void apply_env_overrides(ScenarioConfig& cfg);

nlohmann::json to_json(const ScenarioConfig& cfg);

}  // namespace distb::sim
