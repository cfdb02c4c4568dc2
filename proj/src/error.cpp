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

#include "distb/error.hpp"

namespace distb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::exhausted_network: return "exhausted-network";
    case ErrorCode::duplicate_transaction: return "duplicate-transaction";
    case ErrorCode::fork_rejected: return "fork-rejected";
    case ErrorCode::seal_invalid: return "seal-invalid";
    case ErrorCode::empty_block: return "empty-block";
    case ErrorCode::not_committed: return "not-committed";
    case ErrorCode::integrity: return "integrity";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace distb
