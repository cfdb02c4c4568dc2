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

#include <deque>
#include <functional>
#include <set>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "distb/blockchain.hpp"

namespace distb::chain {

struct PendingEntry {
  Transaction tx;
  Millis entered_at = 0;
};

struct AuditEvent {
  enum class Kind { rejected_invalid, discarded_pending, promoted_pending };
  Kind kind;
  Digest tx_id;
  std::string reason;
  Millis at = 0;
};

struct ChainCheck {
  bool valid = true;
  std::size_t first_bad_index = 0;
  std::string reason;
};

struct ExpireResult {
  std::vector<Digest> discarded;
  std::vector<Digest> promoted;
};

/// Append-only hash chain plus the queue of validated transactions awaiting a
/// block and the waiting room for senders that could not be identified yet.
class Ledger {
 public:
  /// Creates the genesis block (index 0, zero prev_hash, no transactions)
  /// sealed under `consensus`.
  explicit Ledger(Consensus consensus, Millis genesis_time = 0);

  /// Wraps already-existing blocks without checking them; used for imports
  /// that are then passed to validate_chain.
  static Ledger from_blocks(std::vector<Block> blocks, Consensus consensus);

  const std::vector<Block>& blocks() const { return blocks_; }
  const Consensus& consensus() const { return consensus_; }
  const std::vector<Transaction>& queued() const { return queued_; }
  const std::deque<PendingEntry>& pending() const { return pending_; }
  const std::vector<AuditEvent>& audit() const { return audit_; }
  Digest tip_hash() const;
  std::size_t committed_tx_count() const { return committed_.size(); }
  bool is_committed(const Digest& tx_id) const { return committed_.contains(tx_id); }

  /// Valid -> queued for the next block; Pending -> waiting room; Invalid ->
  /// dropped with an audit event. A tx_id already committed, queued or parked
  /// throws duplicate_transaction.
  void admit_or_park(const Transaction& tx, const Verdict& verdict, Millis now);

  /// Promotes parked transactions whose sender is now registered, then drops
  /// entries older than `timeout` (age strictly greater).
  ExpireResult expire_pending(Millis now, const ContractState& contract, Millis timeout);

  /// Seals the first `max_txs` queued transactions into the next block without
  /// appending it. Throws empty_block when nothing is queued.
  Block seal_next(Millis now, std::size_t max_txs) const;

  /// Checks linkage, seal and transaction integrity, then appends and removes
  /// the block's transactions from the queue.
  void append_block(Block block);

  /// Test and tooling hook: raw access for tamper experiments.
  std::vector<Block>& mutable_blocks() { return blocks_; }

 private:
  Ledger() = default;

  Consensus consensus_;
  std::vector<Block> blocks_;
  std::vector<Transaction> queued_;
  std::deque<PendingEntry> pending_;
  std::vector<AuditEvent> audit_;
  std::set<Digest> committed_;
  std::set<Digest> queued_ids_;
  std::set<Digest> pending_ids_;
};

/// Recomputes every digest and link. Empty ledgers are invalid at index 0.
ChainCheck validate_chain(const Ledger& ledger);
ChainCheck validate_chain(const std::vector<Block>& blocks, const Consensus& consensus);

/// Newline-delimited JSON, one block per line.
std::string export_ndjson(const std::vector<Block>& blocks);
std::vector<Block> import_ndjson(const std::string& text);

/// Serializes appends; validation and other reads may run concurrently.
class SharedLedger {
 public:
  explicit SharedLedger(Ledger ledger) : ledger_(std::move(ledger)) {}

  void append_block(Block block);
  ChainCheck validate() const;
  std::size_t height() const;

  template <typename F>
  auto read(F&& f) const {
    std::shared_lock lock(mu_);
    return std::invoke(std::forward<F>(f), ledger_);
  }

  template <typename F>
  auto write(F&& f) {
    std::unique_lock lock(mu_);
    return std::invoke(std::forward<F>(f), ledger_);
  }

 private:
  mutable std::shared_mutex mu_;
  Ledger ledger_;
};

}  // namespace distb::chain
