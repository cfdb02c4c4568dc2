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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distb/error.hpp"
#include "distb/scenario.hpp"

namespace distb::cli {

enum ExitCode : int { ok = 0, config_error = 1, simulation_error = 2, integrity_failure = 3, io_error = 4 };

int exit_code_for(ErrorCode code);

struct SweepSpec {
  std::vector<std::int64_t> nodes{1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  std::vector<double> rates_kps{1, 4, 7, 10, 13, 16, 19, 22, 24, 28, 32};
  std::optional<std::vector<double>> sizes_mb;      // config's file sizes when unset
  std::optional<std::vector<std::int64_t>> tx_counts;  // config's gas counts when unset
  unsigned threads = 0;
};

/// "1:60:5" -> 1, 5, 10, ..., 60 (start, then every multiple of step up to
/// stop). A comma list is taken literally.
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
/// "A:3,B:1"
chain::Stakes parse_stakes(const std::string& text);

/// Config from `path` (defaults when empty) with DISTB_SEED applied.
sim::ScenarioConfig load_config(const std::string& path);

int run(const sim::ScenarioConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out,
        std::ostream& err);
int compare(const sim::ScenarioConfig& cfg, const std::filesystem::path& out_dir,
            std::ostream& out, std::ostream& err);
int sweep(const sim::ScenarioConfig& cfg, const SweepSpec& spec,
          const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int calibrate(const sim::ScenarioConfig& cfg, const std::filesystem::path& out_file,
              std::ostream& out, std::ostream& err);
int validate_chain(const std::filesystem::path& ledger, const std::optional<chain::Stakes>& stakes,
                   std::uint32_t min_difficulty, std::ostream& out, std::ostream& err);
int tables(std::ostream& out);

}  // namespace distb::cli
