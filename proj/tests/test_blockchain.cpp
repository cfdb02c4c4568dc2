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

#include <fstream>
#include <map>

#include <json.hpp>

#include "distb/blockchain.hpp"
#include "distb/error.hpp"
#include "oracles.hpp"

using namespace distb;
using namespace distb::chain;

namespace {

nlohmann::json golden() {
  std::ifstream in(std::string(DISTB_GOLDEN_DIR) + "/canonical_vectors.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

Transaction fixture_tx() { return make_transaction("s-01", "bs", from_hex("deadbeef"), 100); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no distb::Error thrown");
  return ErrorCode::io;
}

}  // namespace

TEST_SUITE("digest") {
  TEST_CASE("sha256 matches reference vectors") {
    for (const auto& v : golden()["sha256"]) {
      const auto input = from_hex(v["input_hex"].get<std::string>());
      CHECK(to_hex(sha256(input)) == v["digest"].get<std::string>());
    }
  }

  TEST_CASE("incremental hashing equals one-shot") {
    const std::string text = "the quick brown fox jumps over the lazy dog";
    Sha256 h;
    const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
    h.update({p, 10});
    Sha256 snapshot = h;
    h.update({p + 10, text.size() - 10});
    CHECK(h.finish() == sha256(text));
    CHECK(snapshot.finish() == sha256(text.substr(0, 10)));
  }

  TEST_CASE("hex round trip and rejects") {
    const Bytes b{0x00, 0x7f, 0xff, 0x10};
    CHECK(to_hex(b) == "007fff10");
    CHECK(from_hex("007FFF10") == b);
    CHECK(code_of([] { from_hex("abc"); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { from_hex("zz"); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { digest_from_hex("00"); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("leading zero bits") {
    Digest d{};
    CHECK(leading_zero_bits(d) == 256);
    d[0] = 0x80;
    CHECK(leading_zero_bits(d) == 0);
    d[0] = 0x00;
    d[1] = 0x01;
    CHECK(leading_zero_bits(d) == 15);
    CHECK(leading_zero_bits(d) == oracle::zero_bits(d));
  }

  TEST_CASE("writer is big-endian with length prefixes") {
    ByteWriter w;
    w.u64(0x0102030405060708ULL);
    w.str("hi");
    CHECK(to_hex(w.data()) == "0102030405060708" "0000000000000002" "6869");
    ByteReader r(w.data());
    CHECK(r.u64() == 0x0102030405060708ULL);
    CHECK(r.str() == "hi");
    CHECK(r.done());
  }

  TEST_CASE("reader rejects truncated input") {
    const Bytes b{0, 0, 0, 0, 0, 0, 0, 9, 1, 2};
    ByteReader r(b);
    CHECK_THROWS_AS(r.bytes(), Error);
  }
}

TEST_SUITE("blockchain") {
  TEST_CASE("transaction encoding matches the golden vector") {
    const auto g = golden()["transaction"];
    const auto tx = fixture_tx();
    CHECK(to_hex(transaction_body(tx)) == g["body_hex"].get<std::string>());
    CHECK(to_hex(tx.checksum) == g["checksum"].get<std::string>());
    CHECK(to_hex(tx.tx_id) == g["tx_id"].get<std::string>());
  }

  TEST_CASE("make_transaction rejects empty ids") {
    CHECK(code_of([] { make_transaction("", "bs", {}, 0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { make_transaction("s", "", {}, 0); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("verification verdicts") {
    ContractState contract;
    auto tx = fixture_tx();
    CHECK(verify_transaction(tx, contract).is_pending());
    contract.register_sensor("s-01");
    CHECK(verify_transaction(tx, contract).is_valid());

    auto bad = tx;
    bad.payload[0] ^= 1;
    CHECK(verify_transaction(bad, contract).is_invalid());
    bad = tx;
    bad.tx_id[3] ^= 1;
    CHECK(verify_transaction(bad, contract).is_invalid());
    bad = tx;
    bad.timestamp = -1;
    CHECK(verify_transaction(bad, contract).is_invalid());
    bad = tx;
    bad.sensor_id.clear();
    CHECK(verify_transaction(bad, contract).is_invalid());

    contract.max_payload_bytes = 2;
    CHECK(verify_transaction(tx, contract).is_invalid());
  }

  TEST_CASE("tampered unregistered tx is invalid, not pending") {
    ContractState contract;
    auto tx = fixture_tx();
    tx.destination = "elsewhere";
    CHECK(verify_transaction(tx, contract).is_invalid());
  }

  TEST_CASE("transaction JSON round trip") {
    const auto tx = fixture_tx();
    CHECK(transaction_from_json(to_json(tx)) == tx);
  }

  TEST_CASE("genesis and block 1 match golden hashes") {
    const auto g = golden()["blocks"];
    const auto genesis = mine_block(0, {}, Digest{}, 8, 0);
    CHECK(genesis.nonce == g[0]["nonce"].get<std::uint64_t>());
    CHECK(to_hex(genesis.hash) == g[0]["hash"].get<std::string>());

    const auto b1 = mine_block(1, {fixture_tx()}, genesis.hash, 8, 1000);
    CHECK(b1.nonce == g[1]["nonce"].get<std::uint64_t>());
    CHECK(to_hex(b1.hash) == g[1]["hash"].get<std::string>());
  }

  TEST_CASE("header bytes agree with a hand-written serializer") {
    auto b = mine_block(1, {fixture_tx(), make_transaction("s-02", "bs", {1, 2}, 7)}, Digest{}, 4, 55);
    CHECK(block_header(b) == oracle::header_bytes(b));
    b.sealer = PosSeal{"alice"};
    CHECK(block_header(b) == oracle::header_bytes(b));
  }

  TEST_CASE("mined nonce is the first that meets the difficulty") {
    const auto b = mine_block(3, {fixture_tx()}, sha256("x"), 6, 12);
    CHECK(leading_zero_bits(b.hash) >= 6);
    CHECK(b.hash == compute_block_hash(b));
    for (std::uint64_t n = 0; n < b.nonce; ++n) {
      auto probe = b;
      probe.nonce = n;
      CHECK(leading_zero_bits(compute_block_hash(probe)) < 6);
    }
  }

  TEST_CASE("non-genesis blocks need a transaction") {
    CHECK(code_of([] { mine_block(1, {}, Digest{}, 1, 0); }) == ErrorCode::empty_block);
    CHECK(code_of([] { seal_pos_block(1, {}, Digest{}, {{"a", 1}}, 0); }) ==
          ErrorCode::empty_block);
  }

  TEST_CASE("encode/decode and JSON round trips") {
    const auto b = mine_block(1, {fixture_tx()}, sha256("p"), 4, 9);
    CHECK(decode_block(encode_block(b)) == b);
    CHECK(block_from_json(to_json(b)) == b);
    const auto p = seal_pos_block(2, {fixture_tx()}, b.hash, {{"a", 1}, {"b", 2}}, 10);
    CHECK(decode_block(encode_block(p)) == p);
    CHECK(block_from_json(to_json(p)) == p);
  }

  TEST_CASE("decode rejects trailing bytes") {
    auto bytes = encode_block(mine_block(0, {}, Digest{}, 1, 0));
    bytes.push_back(0);
    CHECK_THROWS_AS(decode_block(bytes), Error);
  }

  TEST_CASE("validator draw follows stake weights") {
    const Stakes stakes{{"A", 3}, {"B", 1}, {"Z", 0}};
    std::map<std::string, int> hits;
    const int n = 20000;
    for (int i = 0; i < n; ++i) ++hits[select_validator(stakes, static_cast<std::uint64_t>(i))];
    CHECK(hits["Z"] == 0);
    CHECK(static_cast<double>(hits["A"]) / n == doctest::Approx(0.75).epsilon(0.03));
    CHECK(select_validator(stakes, 42) == select_validator(stakes, 42));
  }

  TEST_CASE("validator draw rejects bad stakes") {
    CHECK(code_of([] { select_validator({}, 1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { select_validator({{"a", 0}}, 1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { select_validator({{"a", -1}}, 1); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("seal checks") {
    const auto pow = Consensus::pow(6);
    const auto b = mine_block(0, {}, Digest{}, 6, 0);
    CHECK(check_seal(b, pow).empty());
    CHECK_FALSE(check_seal(b, Consensus::pow(7)).empty());
    CHECK_FALSE(check_seal(b, Consensus::pos({{"a", 1}})).empty());

    const auto pos = Consensus::pos({{"a", 1}, {"b", 1}});
    auto p = seal_block(pos, 0, {}, Digest{}, 0);
    CHECK(check_seal(p, pos).empty());
    auto& v = std::get<PosSeal>(p.sealer).validator;
    v = v == "a" ? "b" : "a";
    p.hash = compute_block_hash(p);
    CHECK_FALSE(check_seal(p, pos).empty());
  }

  TEST_CASE("gas is zero for empty batches and affine otherwise") {
    CHECK(gas_for(0) == 0);
    CHECK(gas_for(1) == 17409);
    CHECK(gas_for(3) == 24083);
    CHECK(gas_for(24) == 94167);
    const GasModel m{21000, 5000};
    CHECK(gas_for(4, m) == 41000);
    for (int n = 2; n < 30; ++n) CHECK(gas_for(n) > gas_for(n - 1));
    CHECK_THROWS_AS(gas_for(-1), Error);
  }
}
