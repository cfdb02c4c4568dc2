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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distb/simulator.hpp"

namespace distb::report {

// Header rows. Column order is part of the file format.
inline constexpr const char* kThroughputHeader = "nodes,distb_kbps,baseline_kbps";
inline constexpr const char* kBandwidthHeader = "arrival_rate_kps,distb_mbps,baseline_mbps";
inline constexpr const char* kResponseHeader = "file_mb,distb_ms,core_ms";
inline constexpr const char* kGasHeader = "tx_count,gas";
inline constexpr const char* kCpuHeader = "time_s,cpu_pct";

/// Shortest round-trip decimal form, '.' separator whatever the locale.
std::string format_number(double v);

/// A missing cell is written as an empty field.
using Cell = std::optional<double>;

std::string csv(const char* header, const std::vector<std::vector<Cell>>& rows);

std::string throughput_csv(const std::vector<sim::Row>& rows);
std::string bandwidth_csv(const std::vector<sim::Row>& rows);
std::string response_csv(const std::vector<sim::Row>& rows);
std::string gas_csv(const std::vector<sim::Series2>& rows);
std::string cpu_csv(const std::vector<sim::Series2>& rows);

/// Single-mode rows: the other mode's column stays empty.
std::string throughput_csv(const sim::MetricsBundle& m);
std::string bandwidth_csv(const sim::MetricsBundle& m);
std::string response_csv(const sim::MetricsBundle& m);

/// Files staged in memory and written together. Each file goes to a
/// temporary name first; if any write fails, the temporaries are removed and
/// nothing under its final name is touched. Throws Error(io).
class OutputSet {
 public:
  void add(std::string name, std::string content);
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }
  void commit(const std::filesystem::path& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace distb::report
