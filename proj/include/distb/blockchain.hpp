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
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "distb/digest.hpp"

namespace distb::chain {

using Millis = std::int64_t;

// ---------------------------------------------------------------------------
// Transactions
// ---------------------------------------------------------------------------

struct Transaction {
  Digest tx_id{};
  std::string sensor_id;
  std::string destination;
  Millis timestamp = 0;
  Bytes payload;
  Digest checksum{};

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Canonical bytes hashed into tx_id: sensor_id, destination, timestamp,
/// payload, checksum (everything except tx_id itself).
Bytes transaction_body(const Transaction& tx);

Transaction make_transaction(std::string sensor_id, std::string destination, Bytes payload,
                             Millis now);

nlohmann::json to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Smart-contract validation
// ---------------------------------------------------------------------------

struct Verdict {
  enum class Kind { valid, pending, invalid };
  Kind kind = Kind::valid;
  std::string reason;

  static Verdict valid() { return {Kind::valid, {}}; }
  static Verdict pending(std::string why) { return {Kind::pending, std::move(why)}; }
  static Verdict invalid(std::string why) { return {Kind::invalid, std::move(why)}; }

  bool is_valid() const { return kind == Kind::valid; }
  bool is_pending() const { return kind == Kind::pending; }
  bool is_invalid() const { return kind == Kind::invalid; }
};

struct ContractState {
  std::set<std::string> known_sensors;
  std::size_t max_payload_bytes = 64 * 1024;

  bool registered(const std::string& sensor) const { return known_sensors.contains(sensor); }
  void register_sensor(std::string sensor) { known_sensors.insert(std::move(sensor)); }
};

/// Invalid for tampered or malformed transactions, Pending for unknown
/// senders, Valid otherwise. Pure.
Verdict verify_transaction(const Transaction& tx, const ContractState& contract);

// ---------------------------------------------------------------------------
// Blocks and consensus
// ---------------------------------------------------------------------------

struct PowSeal {
  std::uint32_t difficulty = 0;
  friend bool operator==(const PowSeal&, const PowSeal&) = default;
};
struct PosSeal {
  std::string validator;
  friend bool operator==(const PosSeal&, const PosSeal&) = default;
};
using Sealer = std::variant<PowSeal, PosSeal>;

struct Block {
  std::uint64_t index = 0;
  Millis timestamp = 0;
  Digest prev_hash{};
  std::vector<Transaction> txs;
  std::uint64_t nonce = 0;
  Sealer sealer = PowSeal{};
  Digest hash{};

  friend bool operator==(const Block&, const Block&) = default;
};

/// Header bytes: index, timestamp, prev_hash, tx count, each tx_id, sealer
/// tag and parameter, nonce. The block hash is SHA-256 of these bytes.
Bytes block_header(const Block& block);
Digest compute_block_hash(const Block& block);

/// Full canonical form (header fields, complete transactions, hash); the
/// storage stub keeps exactly these bytes.
Bytes encode_block(const Block& block);
Block decode_block(std::span<const std::uint8_t> bytes);

nlohmann::json to_json(const Block& block);
Block block_from_json(const nlohmann::json& j);

using Stakes = std::map<std::string, double>;

struct Consensus {
  enum class Kind { pow, pos };
  Kind kind = Kind::pow;
  std::uint32_t difficulty = 8;  // minimum for pow blocks
  Stakes stakes;                 // pos only

  static Consensus pow(std::uint32_t difficulty) { return {Kind::pow, difficulty, {}}; }
  static Consensus pos(Stakes stakes) { return {Kind::pos, 0, std::move(stakes)}; }
};

/// Proof of work: nonce counts up from 0 until the header digest carries at
/// least `difficulty` leading zero bits. A non-genesis block needs >= 1 tx.
Block mine_block(std::uint64_t index, std::vector<Transaction> txs, const Digest& prev_hash,
                 std::uint32_t difficulty, Millis now);

/// Seeded stake-weighted draw. Zero-stake validators are never chosen.
std::string select_validator(const Stakes& stakes, std::uint64_t seed);

/// Seed used to elect the validator of the block that follows `prev_hash`.
std::uint64_t validator_seed(const Digest& prev_hash, std::uint64_t index);

Block seal_pos_block(std::uint64_t index, std::vector<Transaction> txs, const Digest& prev_hash,
                     const Stakes& stakes, Millis now);

/// Seals with whatever the consensus config selects.
Block seal_block(const Consensus& consensus, std::uint64_t index, std::vector<Transaction> txs,
                 const Digest& prev_hash, Millis now);

/// Empty string when the seal is acceptable, otherwise the reason.
std::string check_seal(const Block& block, const Consensus& consensus);

// ---------------------------------------------------------------------------
// Gas
// ---------------------------------------------------------------------------

struct GasModel {
  double base = 14071.428571428571;
  double per_tx = 3337.3015873015875;
};

/// gas(0) = 0; gas(n) = round(base + per_tx * n).
std::int64_t gas_for(std::int64_t batch_size, const GasModel& model = {});

}  // namespace distb::chain
