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

#include "distb/ledger.hpp"

#include <algorithm>
#include <sstream>

#include "distb/error.hpp"

namespace distb::chain {

Ledger::Ledger(Consensus consensus, Millis genesis_time) : consensus_(std::move(consensus)) {
  blocks_.push_back(seal_block(consensus_, 0, {}, Digest{}, genesis_time));
}

Ledger Ledger::from_blocks(std::vector<Block> blocks, Consensus consensus) {
  Ledger l;
  l.consensus_ = std::move(consensus);
  l.blocks_ = std::move(blocks);
  for (const auto& b : l.blocks_) {
    for (const auto& tx : b.txs) l.committed_.insert(tx.tx_id);
  }
  return l;
}

Digest Ledger::tip_hash() const { return blocks_.empty() ? Digest{} : blocks_.back().hash; }

void Ledger::admit_or_park(const Transaction& tx, const Verdict& verdict, Millis now) {
  if (committed_.contains(tx.tx_id) || queued_ids_.contains(tx.tx_id) ||
      pending_ids_.contains(tx.tx_id)) {
    throw Error(ErrorCode::duplicate_transaction,
                "admit_or_park: transaction " + to_hex(tx.tx_id) + " already known");
  }
  switch (verdict.kind) {
    case Verdict::Kind::valid:
      queued_.push_back(tx);
      queued_ids_.insert(tx.tx_id);
      break;
    case Verdict::Kind::pending:
      pending_.push_back({tx, now});
      pending_ids_.insert(tx.tx_id);
      break;
    case Verdict::Kind::invalid:
      audit_.push_back({AuditEvent::Kind::rejected_invalid, tx.tx_id, verdict.reason, now});
      break;
  }
}

ExpireResult Ledger::expire_pending(Millis now, const ContractState& contract, Millis timeout) {
  ExpireResult result;
  std::deque<PendingEntry> keep;
  for (auto& entry : pending_) {
    const Verdict v = verify_transaction(entry.tx, contract);
    if (v.is_valid()) {
      pending_ids_.erase(entry.tx.tx_id);
      queued_.push_back(entry.tx);
      queued_ids_.insert(entry.tx.tx_id);
      result.promoted.push_back(entry.tx.tx_id);
      audit_.push_back({AuditEvent::Kind::promoted_pending, entry.tx.tx_id, {}, now});
    } else if (now - entry.entered_at > timeout || v.is_invalid()) {
      pending_ids_.erase(entry.tx.tx_id);
      result.discarded.push_back(entry.tx.tx_id);
      audit_.push_back({AuditEvent::Kind::discarded_pending, entry.tx.tx_id,
                        v.is_invalid() ? v.reason : "pending timeout", now});
    } else {
      keep.push_back(std::move(entry));
    }
  }
  pending_ = std::move(keep);
  return result;
}

Block Ledger::seal_next(Millis now, std::size_t max_txs) const {
  if (queued_.empty()) {
    throw Error(ErrorCode::empty_block, "seal_next: no queued transactions");
  }
  const std::size_t n = std::min(max_txs == 0 ? queued_.size() : max_txs, queued_.size());
  std::vector<Transaction> txs(queued_.begin(), queued_.begin() + static_cast<std::ptrdiff_t>(n));
  return seal_block(consensus_, blocks_.size(), std::move(txs), tip_hash(), now);
}

void Ledger::append_block(Block block) {
  if (block.prev_hash != tip_hash()) {
    throw Error(ErrorCode::fork_rejected, "append_block: prev_hash does not match the tip");
  }
  if (block.index != blocks_.size()) {
    throw Error(ErrorCode::fork_rejected, "append_block: index is not the next height");
  }
  if (block.index > 0 && block.txs.empty()) {
    throw Error(ErrorCode::empty_block, "append_block: block carries no transactions");
  }
  if (compute_block_hash(block) != block.hash) {
    throw Error(ErrorCode::seal_invalid, "append_block: stored hash does not match header");
  }
  if (const auto why = check_seal(block, consensus_); !why.empty()) {
    throw Error(ErrorCode::seal_invalid, "append_block: " + why);
  }
  std::set<Digest> seen;
  for (const auto& tx : block.txs) {
    if (sha256(tx.payload) != tx.checksum || sha256(transaction_body(tx)) != tx.tx_id) {
      throw Error(ErrorCode::seal_invalid, "append_block: transaction digest mismatch");
    }
    if (committed_.contains(tx.tx_id) || !seen.insert(tx.tx_id).second) {
      throw Error(ErrorCode::duplicate_transaction,
                  "append_block: transaction " + to_hex(tx.tx_id) + " committed twice");
    }
  }
  for (const auto& tx : block.txs) {
    committed_.insert(tx.tx_id);
    queued_ids_.erase(tx.tx_id);
  }
  std::erase_if(queued_, [&](const Transaction& tx) { return seen.contains(tx.tx_id); });
  blocks_.push_back(std::move(block));
}

ChainCheck validate_chain(const std::vector<Block>& blocks, const Consensus& consensus) {
  if (blocks.empty()) return {false, 0, "no genesis block"};
  std::set<Digest> seen;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    auto bad = [i](std::string why) { return ChainCheck{false, i, std::move(why)}; };
    if (b.index != i) return bad("index out of sequence");
    const Digest expected_prev = i == 0 ? Digest{} : blocks[i - 1].hash;
    if (b.prev_hash != expected_prev) return bad("prev_hash does not link");
    if (i > 0 && b.txs.empty()) return bad("empty non-genesis block");
    for (const auto& tx : b.txs) {
      if (sha256(tx.payload) != tx.checksum) return bad("payload checksum mismatch");
      if (sha256(transaction_body(tx)) != tx.tx_id) return bad("tx_id mismatch");
      if (!seen.insert(tx.tx_id).second) return bad("transaction committed twice");
    }
    if (compute_block_hash(b) != b.hash) return bad("block hash mismatch");
    if (const auto why = check_seal(b, consensus); !why.empty()) return bad(why);
  }
  return {};
}

ChainCheck validate_chain(const Ledger& ledger) {
  return validate_chain(ledger.blocks(), ledger.consensus());
}

std::string export_ndjson(const std::vector<Block>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += to_json(b).dump();
    out += '\n';
  }
  return out;
}

std::vector<Block> import_ndjson(const std::string& text) {
  std::vector<Block> blocks;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      blocks.push_back(block_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::invalid_argument,
                  "ledger line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_argument,
                  "ledger line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (blocks.empty()) throw Error(ErrorCode::invalid_argument, "ledger export is empty");
  return blocks;
}

void SharedLedger::append_block(Block block) {
  std::unique_lock lock(mu_);
  ledger_.append_block(std::move(block));
}

ChainCheck SharedLedger::validate() const {
  std::shared_lock lock(mu_);
  return validate_chain(ledger_);
}

std::size_t SharedLedger::height() const {
  std::shared_lock lock(mu_);
  return ledger_.blocks().size();
}

}  // namespace distb::chain
