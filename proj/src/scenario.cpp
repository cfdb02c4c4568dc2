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

#include "distb/scenario.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "distb/error.hpp"

namespace distb::sim {

const char* to_string(Mode mode) { return mode == Mode::distb ? "distb" : "of-baseline"; }

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void require(bool ok, const std::string& field, const std::string& bound) {
  if (!ok) fail(field + " must be " + bound);
}

void finite_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "> 0");
}

void finite_nonneg(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0, field, ">= 0");
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field + ": expected an integer");
  return v.get<std::int64_t>();
}

const json& object(const json& v, const std::string& field) {
  if (!v.is_object()) fail(field + ": expected an object");
  return v;
}

[[noreturn]] void unknown(const std::string& prefix, const std::string& key) {
  fail("unknown key '" + prefix + key + "'");
}

AttackConfig parse_attack(const json& j) {
  AttackConfig a;
  for (const auto& [k, v] : object(j, "attack").items()) {
    const std::string f = "attack." + k;
    if (k == "start_ms") a.start_ms = number(v, f);
    else if (k == "stop_ms") a.stop_ms = number(v, f);
    else if (k == "sources") a.sources = static_cast<std::int32_t>(integer(v, f));
    else if (k == "multiplier") a.multiplier = number(v, f);
    else if (k == "ramp_min_ms") a.ramp_min_ms = number(v, f);
    else if (k == "ramp_max_ms") a.ramp_max_ms = number(v, f);
    else unknown("attack.", k);
  }
  return a;
}

chain::Consensus parse_consensus(const json& j) {
  std::string kind = "pow";
  std::optional<std::int64_t> difficulty;
  std::optional<chain::Stakes> stakes;
  for (const auto& [k, v] : object(j, "consensus").items()) {
    if (k == "kind") {
      if (!v.is_string()) fail("consensus.kind: expected \"pow\" or \"pos\"");
      kind = v.get<std::string>();
    } else if (k == "difficulty") {
      difficulty = integer(v, "consensus.difficulty");
    } else if (k == "stakes") {
      chain::Stakes s;
      for (const auto& [name, w] : object(v, "consensus.stakes").items()) {
        s[name] = number(w, "consensus.stakes." + name);
      }
      stakes = std::move(s);
    } else {
      unknown("consensus.", k);
    }
  }
  if (kind == "pow") {
    if (stakes) fail("consensus.stakes only applies to kind \"pos\"");
    const auto d = difficulty.value_or(8);
    require(d >= 1 && d <= 32, "consensus.difficulty", "in [1, 32]");
    return chain::Consensus::pow(static_cast<std::uint32_t>(d));
  }
  if (kind == "pos") {
    if (difficulty) fail("consensus.difficulty only applies to kind \"pow\"");
    if (!stakes) fail("consensus.stakes is required for kind \"pos\"");
    return chain::Consensus::pos(*stakes);
  }
  fail("consensus.kind must be \"pow\" or \"pos\"");
}

template <typename T, typename F>
std::vector<T> list(const json& v, const std::string& field, F&& element) {
  if (!v.is_array()) fail(field + ": expected an array");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(element(e, field));
  return out;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.node_count >= 1 && c.node_count <= 100000, "node_count", "in [1, 100000]");
  finite_positive(c.area_side_m, "area_side_m");
  finite_positive(c.data_rate_mbps, "data_rate_mbps");
  require(c.packet_size_min >= 1, "packet_size_min", ">= 1");
  require(c.packet_size_max >= c.packet_size_min && c.packet_size_max <= 65536, "packet_size_max",
          "in [packet_size_min, 65536]");
  finite_positive(c.sim_time_ms, "sim_time_ms");
  require(c.controllers >= 1, "controllers", ">= 1");
  require(c.gateways >= 1, "gateways", ">= 1");
  finite_positive(c.sensor_rate_pps, "sensor_rate_pps");
  finite_positive(c.round_period_ms, "round_period_ms");
  finite_positive(c.measurement_period_ms, "measurement_period_ms");
  finite_positive(c.cpu_sample_ms, "cpu_sample_ms");
  if (c.attack) {
    const auto& a = *c.attack;
    finite_nonneg(a.start_ms, "attack.start_ms");
    require(std::isfinite(a.stop_ms) && a.stop_ms > a.start_ms, "attack.stop_ms", "> attack.start_ms");
    require(a.stop_ms <= c.sim_time_ms, "attack.stop_ms", "<= sim_time_ms");
    require(a.sources >= 1, "attack.sources", ">= 1");
    finite_positive(a.multiplier, "attack.multiplier");
    finite_nonneg(a.ramp_min_ms, "attack.ramp_min_ms");
    require(std::isfinite(a.ramp_max_ms) && a.ramp_max_ms >= a.ramp_min_ms, "attack.ramp_max_ms",
            ">= attack.ramp_min_ms");
  }
  if (c.consensus.kind == chain::Consensus::Kind::pow) {
    require(c.consensus.difficulty >= 1 && c.consensus.difficulty <= 32, "consensus.difficulty",
            "in [1, 32]");
  } else {
    double total = 0.0;
    for (const auto& [name, w] : c.consensus.stakes) {
      finite_nonneg(w, "consensus.stakes." + name);
      total += w;
    }
    require(total > 0.0, "consensus.stakes", "non-empty with a positive total");
  }
  for (double s : c.file_sizes_mb) finite_positive(s, "file_transfer.sizes_mb[]");
  for (auto n : c.gas_tx_counts) require(n >= 0, "gas.tx_counts[]", ">= 0");
  finite_positive(c.detector.window_ms, "detector.window_ms");
  finite_positive(c.detector.threshold_factor, "detector.threshold_factor");
  finite_nonneg(c.detector.min_threshold, "detector.min_threshold");
  finite_positive(c.detector.period_ms, "detector.period_ms");
  require(c.chain.batch_size >= 1, "blockchain.batch_size", ">= 1");
  finite_positive(c.chain.block_interval_ms, "blockchain.block_interval_ms");
  finite_nonneg(c.chain.pending_timeout_ms, "blockchain.pending_timeout_ms");
  finite_positive(c.chain.sweep_period_ms, "blockchain.sweep_period_ms");
  require(c.chain.unregistered_sensors >= 0, "blockchain.unregistered_sensors", ">= 0");
  require(std::isfinite(c.chain.register_after_ms), "blockchain.register_after_ms", "finite");
  finite_nonneg(c.placement.building_height, "placement.building_height");
  finite_positive(c.placement.energy_min, "placement.energy_min");
  require(c.placement.energy_max >= c.placement.energy_min, "placement.energy_max",
          ">= placement.energy_min");
  finite_positive(c.placement.radius_min, "placement.radius_min");
  require(c.placement.radius_max >= c.placement.radius_min, "placement.radius_max",
          ">= placement.radius_min");
  finite_nonneg(c.energy.head_cost, "energy.head_cost");
  finite_nonneg(c.energy.tx_cost, "energy.tx_cost");
  require(c.link.queue_limit_bytes >= c.packet_size_max, "link.queue_limit_bytes",
          ">= packet_size_max");
  finite_nonneg(c.link.hop_delay_ms, "link.hop_delay_ms");
  finite_positive(c.calibration.bandwidth_base_mbps, "calibration.bandwidth_base_mbps");
  require(!c.calibration.throughput_distb.knots.empty() &&
              !c.calibration.throughput_baseline.knots.empty(),
          "calibration.throughput_*", "non-empty");
}

ScenarioConfig parse_config_json(const json& j) {
  if (!j.is_object()) fail("config must be a JSON object");
  ScenarioConfig c;
  for (const auto& [k, v] : j.items()) {
    if (k == "mode") {
      const auto m = v.is_string() ? v.get<std::string>() : std::string();
      if (m == "distb") c.mode = Mode::distb;
      else if (m == "of-baseline") c.mode = Mode::baseline;
      else fail("mode must be \"distb\" or \"of-baseline\"");
    } else if (k == "node_count") {
      c.node_count = integer(v, k);
    } else if (k == "area_side_m") {
      c.area_side_m = number(v, k);
    } else if (k == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail("seed must be a non-negative integer");
      }
      c.seed = v.get<std::uint64_t>();
    } else if (k == "data_rate_mbps") {
      c.data_rate_mbps = number(v, k);
    } else if (k == "packet_size_min") {
      c.packet_size_min = static_cast<std::int32_t>(integer(v, k));
    } else if (k == "packet_size_max") {
      c.packet_size_max = static_cast<std::int32_t>(integer(v, k));
    } else if (k == "sim_time_ms") {
      c.sim_time_ms = number(v, k);
    } else if (k == "controllers") {
      c.controllers = static_cast<std::int32_t>(integer(v, k));
    } else if (k == "gateways") {
      c.gateways = static_cast<std::int32_t>(integer(v, k));
    } else if (k == "sensor_rate_pps") {
      c.sensor_rate_pps = number(v, k);
    } else if (k == "round_period_ms") {
      c.round_period_ms = number(v, k);
    } else if (k == "measurement_period_ms") {
      c.measurement_period_ms = number(v, k);
    } else if (k == "cpu_sample_ms") {
      c.cpu_sample_ms = number(v, k);
    } else if (k == "attack") {
      if (v.is_null()) c.attack.reset();
      else c.attack = parse_attack(v);
    } else if (k == "consensus") {
      c.consensus = parse_consensus(v);
    } else if (k == "file_transfer") {
      for (const auto& [fk, fv] : object(v, k).items()) {
        if (fk == "sizes_mb") c.file_sizes_mb = list<double>(fv, "file_transfer.sizes_mb", number);
        else unknown("file_transfer.", fk);
      }
    } else if (k == "gas") {
      for (const auto& [gk, gv] : object(v, k).items()) {
        if (gk == "tx_counts") c.gas_tx_counts = list<std::int64_t>(gv, "gas.tx_counts", integer);
        else unknown("gas.", gk);
      }
    } else if (k == "detector") {
      for (const auto& [dk, dv] : object(v, k).items()) {
        const std::string f = "detector." + dk;
        if (dk == "window_ms") c.detector.window_ms = number(dv, f);
        else if (dk == "threshold_factor") c.detector.threshold_factor = number(dv, f);
        else if (dk == "min_threshold") c.detector.min_threshold = number(dv, f);
        else if (dk == "period_ms") c.detector.period_ms = number(dv, f);
        else unknown("detector.", dk);
      }
    } else if (k == "blockchain") {
      for (const auto& [bk, bv] : object(v, k).items()) {
        const std::string f = "blockchain." + bk;
        if (bk == "batch_size") c.chain.batch_size = static_cast<std::int32_t>(integer(bv, f));
        else if (bk == "block_interval_ms") c.chain.block_interval_ms = number(bv, f);
        else if (bk == "pending_timeout_ms") c.chain.pending_timeout_ms = number(bv, f);
        else if (bk == "sweep_period_ms") c.chain.sweep_period_ms = number(bv, f);
        else if (bk == "unregistered_sensors")
          c.chain.unregistered_sensors = static_cast<std::int32_t>(integer(bv, f));
        else if (bk == "register_after_ms") c.chain.register_after_ms = number(bv, f);
        else unknown("blockchain.", bk);
      }
    } else if (k == "placement") {
      for (const auto& [pk, pv] : object(v, k).items()) {
        const std::string f = "placement." + pk;
        if (pk == "building_height") c.placement.building_height = number(pv, f);
        else if (pk == "energy_min") c.placement.energy_min = number(pv, f);
        else if (pk == "energy_max") c.placement.energy_max = number(pv, f);
        else if (pk == "radius_min") c.placement.radius_min = number(pv, f);
        else if (pk == "radius_max") c.placement.radius_max = number(pv, f);
        else if (pk == "base_station") {
          const auto xyz = list<double>(pv, f, number);
          if (xyz.size() != 3) fail(f + ": expected [x, y, z]");
          c.placement.base_station = {xyz[0], xyz[1], xyz[2]};
        } else unknown("placement.", pk);
      }
    } else if (k == "energy") {
      for (const auto& [ek, ev] : object(v, k).items()) {
        const std::string f = "energy." + ek;
        if (ek == "head_cost") c.energy.head_cost = number(ev, f);
        else if (ek == "tx_cost") c.energy.tx_cost = number(ev, f);
        else unknown("energy.", ek);
      }
    } else if (k == "link") {
      for (const auto& [lk, lv] : object(v, k).items()) {
        const std::string f = "link." + lk;
        if (lk == "queue_limit_bytes") c.link.queue_limit_bytes = integer(lv, f);
        else if (lk == "hop_delay_ms") c.link.hop_delay_ms = number(lv, f);
        else unknown("link.", lk);
      }
    } else if (k == "calibration") {
      c.calibration = calib::calibration_from_json(v, c.calibration);
    } else {
      unknown("", k);
    }
  }
  validate(c);
  return c;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config_json(j);
}

void apply_env_overrides(ScenarioConfig& cfg) {
  const char* raw = std::getenv("DISTB_SEED");
  if (raw == nullptr) return;
  const std::string text(raw);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    fail("DISTB_SEED must be a non-negative integer, got '" + text + "'");
  }
  errno = 0;
  const auto v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) fail("DISTB_SEED out of range");
  cfg.seed = v;
}

nlohmann::json to_json(const ScenarioConfig& c) {
  json consensus;
  if (c.consensus.kind == chain::Consensus::Kind::pow) {
    consensus = {{"kind", "pow"}, {"difficulty", c.consensus.difficulty}};
  } else {
    consensus = {{"kind", "pos"}, {"stakes", c.consensus.stakes}};
  }
  json attack = nullptr;
  if (c.attack) {
    attack = {{"start_ms", c.attack->start_ms},         {"stop_ms", c.attack->stop_ms},
              {"sources", c.attack->sources},           {"multiplier", c.attack->multiplier},
              {"ramp_min_ms", c.attack->ramp_min_ms},   {"ramp_max_ms", c.attack->ramp_max_ms}};
  }
  const auto& bs = c.placement.base_station;
  return {
      {"mode", to_string(c.mode)},
      {"node_count", c.node_count},
      {"area_side_m", c.area_side_m},
      {"seed", c.seed},
      {"data_rate_mbps", c.data_rate_mbps},
      {"packet_size_min", c.packet_size_min},
      {"packet_size_max", c.packet_size_max},
      {"sim_time_ms", c.sim_time_ms},
      {"controllers", c.controllers},
      {"gateways", c.gateways},
      {"sensor_rate_pps", c.sensor_rate_pps},
      {"round_period_ms", c.round_period_ms},
      {"measurement_period_ms", c.measurement_period_ms},
      {"cpu_sample_ms", c.cpu_sample_ms},
      {"attack", attack},
      {"consensus", consensus},
      {"file_transfer", {{"sizes_mb", c.file_sizes_mb}}},
      {"gas", {{"tx_counts", c.gas_tx_counts}}},
      {"detector",
       {{"window_ms", c.detector.window_ms},
        {"threshold_factor", c.detector.threshold_factor},
        {"min_threshold", c.detector.min_threshold},
        {"period_ms", c.detector.period_ms}}},
      {"blockchain",
       {{"batch_size", c.chain.batch_size},
        {"block_interval_ms", c.chain.block_interval_ms},
        {"pending_timeout_ms", c.chain.pending_timeout_ms},
        {"sweep_period_ms", c.chain.sweep_period_ms},
        {"unregistered_sensors", c.chain.unregistered_sensors},
        {"register_after_ms", c.chain.register_after_ms}}},
      {"placement",
       {{"building_height", c.placement.building_height},
        {"energy_min", c.placement.energy_min},
        {"energy_max", c.placement.energy_max},
        {"radius_min", c.placement.radius_min},
        {"radius_max", c.placement.radius_max},
        {"base_station", {bs.x, bs.y, bs.z}}}},
      {"energy", {{"head_cost", c.energy.head_cost}, {"tx_cost", c.energy.tx_cost}}},
      {"link",
       {{"queue_limit_bytes", c.link.queue_limit_bytes}, {"hop_delay_ms", c.link.hop_delay_ms}}},
      {"calibration", calib::to_json(c.calibration)},
  };
}

}  // namespace distb::sim
