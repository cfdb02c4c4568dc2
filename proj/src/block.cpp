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

#include <cmath>
#include <string>

#include "distb/blockchain.hpp"
#include "distb/error.hpp"
#include "distb/rng.hpp"

namespace distb::chain {

namespace {

constexpr std::uint64_t kSealPow = 0;
constexpr std::uint64_t kSealPos = 1;

// Everything in the header except the trailing nonce.
void write_header_prefix(ByteWriter& w, const Block& block) {
  w.u64(block.index);
  w.i64(block.timestamp);
  w.bytes(block.prev_hash);
  w.u64(block.txs.size());
  for (const auto& tx : block.txs) w.bytes(tx.tx_id);
  if (const auto* pow = std::get_if<PowSeal>(&block.sealer)) {
    w.u64(kSealPow);
    w.u64(pow->difficulty);
  } else {
    w.u64(kSealPos);
    w.str(std::get<PosSeal>(block.sealer).validator);
  }
}

void write_tx(ByteWriter& w, const Transaction& tx) {
  w.bytes(tx.tx_id);
  w.str(tx.sensor_id);
  w.str(tx.destination);
  w.i64(tx.timestamp);
  w.bytes(tx.payload);
  w.bytes(tx.checksum);
}

Transaction read_tx(ByteReader& r) {
  Transaction tx;
  tx.tx_id = r.digest();
  tx.sensor_id = r.str();
  tx.destination = r.str();
  tx.timestamp = r.i64();
  tx.payload = r.bytes();
  tx.checksum = r.digest();
  return tx;
}

}  // namespace

Bytes block_header(const Block& block) {
  ByteWriter w;
  write_header_prefix(w, block);
  w.u64(block.nonce);
  return w.take();
}

Digest compute_block_hash(const Block& block) { return sha256(block_header(block)); }

Bytes encode_block(const Block& block) {
  ByteWriter w;
  w.u64(block.index);
  w.i64(block.timestamp);
  w.bytes(block.prev_hash);
  w.u64(block.txs.size());
  for (const auto& tx : block.txs) write_tx(w, tx);
  if (const auto* pow = std::get_if<PowSeal>(&block.sealer)) {
    w.u64(kSealPow);
    w.u64(pow->difficulty);
  } else {
    w.u64(kSealPos);
    w.str(std::get<PosSeal>(block.sealer).validator);
  }
  w.u64(block.nonce);
  w.bytes(block.hash);
  return w.take();
}

Block decode_block(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Block b;
  b.index = r.u64();
  b.timestamp = r.i64();
  b.prev_hash = r.digest();
  const std::uint64_t count = r.u64();
  if (count > bytes.size()) throw Error(ErrorCode::integrity, "decode_block: bad tx count");
  b.txs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) b.txs.push_back(read_tx(r));
  const std::uint64_t tag = r.u64();
  if (tag == kSealPow) {
    const std::uint64_t difficulty = r.u64();
    if (difficulty > 256) throw Error(ErrorCode::integrity, "decode_block: difficulty out of range");
    b.sealer = PowSeal{static_cast<std::uint32_t>(difficulty)};
  } else if (tag == kSealPos) {
    b.sealer = PosSeal{r.str()};
  } else {
    throw Error(ErrorCode::integrity, "decode_block: unknown sealer tag");
  }
  b.nonce = r.u64();
  b.hash = r.digest();
  if (!r.done()) throw Error(ErrorCode::integrity, "decode_block: trailing bytes");
  return b;
}

nlohmann::json to_json(const Block& block) {
  nlohmann::json sealer;
  if (const auto* pow = std::get_if<PowSeal>(&block.sealer)) {
    sealer = {{"kind", "pow"}, {"difficulty", pow->difficulty}};
  } else {
    sealer = {{"kind", "pos"}, {"validator", std::get<PosSeal>(block.sealer).validator}};
  }
  nlohmann::json txs = nlohmann::json::array();
  for (const auto& tx : block.txs) txs.push_back(to_json(tx));
  return {{"index", block.index},
          {"timestamp", block.timestamp},
          {"prev_hash", to_hex(block.prev_hash)},
          {"nonce", block.nonce},
          {"sealer", std::move(sealer)},
          {"hash", to_hex(block.hash)},
          {"txs", std::move(txs)}};
}

Block block_from_json(const nlohmann::json& j) {
  Block b;
  b.index = j.at("index").get<std::uint64_t>();
  b.timestamp = j.at("timestamp").get<Millis>();
  b.prev_hash = digest_from_hex(j.at("prev_hash").get<std::string>());
  b.nonce = j.at("nonce").get<std::uint64_t>();
  const auto& sealer = j.at("sealer");
  const auto kind = sealer.at("kind").get<std::string>();
  if (kind == "pow") {
    b.sealer = PowSeal{sealer.at("difficulty").get<std::uint32_t>()};
  } else if (kind == "pos") {
    b.sealer = PosSeal{sealer.at("validator").get<std::string>()};
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown sealer kind '" + kind + "'");
  }
  b.hash = digest_from_hex(j.at("hash").get<std::string>());
  for (const auto& tx : j.at("txs")) b.txs.push_back(transaction_from_json(tx));
  return b;
}

Block mine_block(std::uint64_t index, std::vector<Transaction> txs, const Digest& prev_hash,
                 std::uint32_t difficulty, Millis now) {
  if (index > 0 && txs.empty()) {
    throw Error(ErrorCode::empty_block, "mine_block: non-genesis block without transactions");
  }
  if (difficulty > 256) {
    throw Error(ErrorCode::invalid_argument, "mine_block: difficulty above 256 bits");
  }
  Block block;
  block.index = index;
  block.timestamp = now;
  block.prev_hash = prev_hash;
  block.txs = std::move(txs);
  block.sealer = PowSeal{difficulty};

  ByteWriter prefix;
  write_header_prefix(prefix, block);
  Sha256 base;
  base.update(prefix.data());
  for (std::uint64_t nonce = 0;; ++nonce) {
    ByteWriter tail;
    tail.u64(nonce);
    Sha256 h = base;
    h.update(tail.data());
    const Digest d = h.finish();
    if (leading_zero_bits(d) >= static_cast<int>(difficulty)) {
      block.nonce = nonce;
      block.hash = d;
      return block;
    }
  }
}

std::string select_validator(const Stakes& stakes, std::uint64_t seed) {
  double total = 0.0;
  for (const auto& [id, weight] : stakes) {
    if (weight < 0.0 || !std::isfinite(weight)) {
      throw Error(ErrorCode::invalid_argument, "select_validator: stake of '" + id +
                                                   "' must be finite and >= 0");
    }
    total += weight;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "select_validator: no positive stake");
  }
  Rng rng(mix_seed(seed, 0x706f73ULL));
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  const std::string* last_positive = nullptr;
  for (const auto& [id, weight] : stakes) {
    if (weight <= 0.0) continue;
    last_positive = &id;
    cumulative += weight;
    if (target < cumulative) return id;
  }
  return *last_positive;
}

std::uint64_t validator_seed(const Digest& prev_hash, std::uint64_t index) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | prev_hash[static_cast<std::size_t>(i)];
  return v ^ index;
}

Block seal_pos_block(std::uint64_t index, std::vector<Transaction> txs, const Digest& prev_hash,
                     const Stakes& stakes, Millis now) {
  if (index > 0 && txs.empty()) {
    throw Error(ErrorCode::empty_block, "seal_pos_block: non-genesis block without transactions");
  }
  Block block;
  block.index = index;
  block.timestamp = now;
  block.prev_hash = prev_hash;
  block.txs = std::move(txs);
  block.sealer = PosSeal{select_validator(stakes, validator_seed(prev_hash, index))};
  block.hash = compute_block_hash(block);
  return block;
}

Block seal_block(const Consensus& consensus, std::uint64_t index, std::vector<Transaction> txs,
                 const Digest& prev_hash, Millis now) {
  if (consensus.kind == Consensus::Kind::pos) {
    return seal_pos_block(index, std::move(txs), prev_hash, consensus.stakes, now);
  }
  return mine_block(index, std::move(txs), prev_hash, consensus.difficulty, now);
}

std::string check_seal(const Block& block, const Consensus& consensus) {
  if (const auto* pow = std::get_if<PowSeal>(&block.sealer)) {
    if (consensus.kind != Consensus::Kind::pow) return "pow seal on a pos chain";
    if (pow->difficulty < consensus.difficulty) {
      return "pow difficulty " + std::to_string(pow->difficulty) + " below required " +
             std::to_string(consensus.difficulty);
    }
    if (leading_zero_bits(block.hash) < static_cast<int>(pow->difficulty)) {
      return "hash misses pow difficulty";
    }
    return {};
  }
  const auto& pos = std::get<PosSeal>(block.sealer);
  if (consensus.kind != Consensus::Kind::pos) return "pos seal on a pow chain";
  if (pos.validator.empty()) return "pos seal without validator";
  if (!consensus.stakes.empty() &&
      pos.validator != select_validator(consensus.stakes,
                                        validator_seed(block.prev_hash, block.index))) {
    return "validator was not elected for this height";
  }
  return {};
}

std::int64_t gas_for(std::int64_t batch_size, const GasModel& model) {
  if (batch_size < 0) {
    throw Error(ErrorCode::invalid_argument, "gas_for: negative batch size");
  }
  if (batch_size == 0) return 0;
  return std::llround(model.base + model.per_tx * static_cast<double>(batch_size));
}

}  // namespace distb::chain
