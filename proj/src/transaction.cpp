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

#include <string>

#include "distb/blockchain.hpp"
#include "distb/error.hpp"

namespace distb::chain {

Bytes transaction_body(const Transaction& tx) {
  ByteWriter w;
  w.str(tx.sensor_id);
  w.str(tx.destination);
  w.i64(tx.timestamp);
  w.bytes(tx.payload);
  w.bytes(tx.checksum);
  return w.take();
}

Transaction make_transaction(std::string sensor_id, std::string destination, Bytes payload,
                             Millis now) {
  if (sensor_id.empty()) {
    throw Error(ErrorCode::invalid_argument, "make_transaction: empty sensor_id");
  }
  if (destination.empty()) {
    throw Error(ErrorCode::invalid_argument, "make_transaction: empty destination");
  }
  Transaction tx;
  tx.sensor_id = std::move(sensor_id);
  tx.destination = std::move(destination);
  tx.timestamp = now;
  tx.payload = std::move(payload);
  tx.checksum = sha256(tx.payload);
  tx.tx_id = sha256(transaction_body(tx));
  return tx;
}

Verdict verify_transaction(const Transaction& tx, const ContractState& contract) {
  if (tx.sensor_id.empty() || tx.destination.empty()) {
    return Verdict::invalid("malformed: empty sensor_id or destination");
  }
  if (tx.timestamp < 0) return Verdict::invalid("malformed: negative timestamp");
  if (tx.payload.size() > contract.max_payload_bytes) {
    return Verdict::invalid("malformed: payload exceeds contract limit");
  }
  if (sha256(tx.payload) != tx.checksum) return Verdict::invalid("checksum mismatch");
  if (sha256(transaction_body(tx)) != tx.tx_id) return Verdict::invalid("tx_id mismatch");
  if (!contract.registered(tx.sensor_id)) {
    return Verdict::pending("sensor " + tx.sensor_id + " is not registered");
  }
  return Verdict::valid();
}

nlohmann::json to_json(const Transaction& tx) {
  return {{"tx_id", to_hex(tx.tx_id)},
          {"sensor_id", tx.sensor_id},
          {"destination", tx.destination},
          {"timestamp", tx.timestamp},
          {"payload_hex", to_hex(tx.payload)},
          {"checksum", to_hex(tx.checksum)}};
}

Transaction transaction_from_json(const nlohmann::json& j) {
  Transaction tx;
  tx.tx_id = digest_from_hex(j.at("tx_id").get<std::string>());
  tx.sensor_id = j.at("sensor_id").get<std::string>();
  tx.destination = j.at("destination").get<std::string>();
  tx.timestamp = j.at("timestamp").get<Millis>();
  tx.payload = from_hex(j.at("payload_hex").get<std::string>());
  tx.checksum = digest_from_hex(j.at("checksum").get<std::string>());
  return tx;
}

}  // namespace distb::chain
