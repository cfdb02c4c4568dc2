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

#include "distb/storage.hpp"

#include <fstream>
#include <iterator>

#include "distb/error.hpp"

namespace distb::chain {

namespace {

Block verified(std::span<const std::uint8_t> bytes, const Digest& id) {
  Block b;
  try {
    b = decode_block(bytes);
  } catch (const Error& e) {
    throw Error(ErrorCode::integrity, "block " + to_hex(id) + ": " + e.what());
  }
  if (b.hash != id || compute_block_hash(b) != id) {
    throw Error(ErrorCode::integrity, "block " + to_hex(id) + ": content does not hash to its id");
  }
  for (const auto& tx : b.txs) {
    if (sha256(tx.payload) != tx.checksum || sha256(transaction_body(tx)) != tx.tx_id) {
      throw Error(ErrorCode::integrity, "block " + to_hex(id) + ": transaction digest mismatch");
    }
  }
  return b;
}

}  // namespace

Digest MemoryBlockStore::put(const Block& block) {
  records_.try_emplace(block.hash, encode_block(block));
  return block.hash;
}

Block MemoryBlockStore::get(const Digest& id) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw Error(ErrorCode::not_committed, "no stored block " + to_hex(id));
  }
  return verified(it->second, id);
}

DirectoryBlockStore::DirectoryBlockStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::io, "block store: cannot create " + root_.string());
}

std::filesystem::path DirectoryBlockStore::path_for(const Digest& id) const {
  return root_ / (to_hex(id) + ".blk");
}

Digest DirectoryBlockStore::put(const Block& block) {
  const auto path = path_for(block.hash);
  if (std::filesystem::exists(path)) return block.hash;
  const Bytes bytes = encode_block(block);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "block store: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
  return block.hash;
}

Block DirectoryBlockStore::get(const Digest& id) const {
  std::ifstream in(path_for(id), std::ios::binary);
  if (!in) throw Error(ErrorCode::not_committed, "no stored block " + to_hex(id));
  const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return verified(bytes, id);
}

std::size_t DirectoryBlockStore::size() const {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (entry.path().extension() == ".blk") ++n;
  }
  return n;
}

Digest commit_to_storage(const Ledger& ledger, const Block& block, BlockStore& store) {
  const auto& blocks = ledger.blocks();
  if (block.index >= blocks.size() || blocks[block.index] != block) {
    throw Error(ErrorCode::not_committed,
                "commit_to_storage: block " + to_hex(block.hash) + " is not in the ledger");
  }
  return store.put(block);
}

}  // namespace distb::chain
