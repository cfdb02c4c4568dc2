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

#include <filesystem>
#include <map>
#include <string>

#include "distb/blockchain.hpp"
#include "distb/ledger.hpp"

namespace distb::chain {

/// Content-addressed block store; the record id is the block hash.
class BlockStore {
 public:
  virtual ~BlockStore() = default;

  /// Stores the canonical bytes; storing the same block again is a no-op.
  virtual Digest put(const Block& block) = 0;
  /// Throws integrity when the stored bytes no longer hash to `id`, and
  /// not_committed when nothing is stored under it.
  virtual Block get(const Digest& id) const = 0;
  virtual std::size_t size() const = 0;
};

class MemoryBlockStore final : public BlockStore {
 public:
  Digest put(const Block& block) override;
  Block get(const Digest& id) const override;
  std::size_t size() const override { return records_.size(); }

  /// Raw access for corruption tests.
  Bytes& raw(const Digest& id) { return records_.at(id); }

 private:
  std::map<Digest, Bytes> records_;
};

/// One file per block named <hash-hex>.blk.
class DirectoryBlockStore final : public BlockStore {
 public:
  explicit DirectoryBlockStore(std::filesystem::path root);

  Digest put(const Block& block) override;
  Block get(const Digest& id) const override;
  std::size_t size() const override;

  std::filesystem::path path_for(const Digest& id) const;

 private:
  std::filesystem::path root_;
};

/// Stores a block that is already part of `ledger`; anything else throws
/// not_committed.
Digest commit_to_storage(const Ledger& ledger, const Block& block, BlockStore& store);

}  // namespace distb::chain
