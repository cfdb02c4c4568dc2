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

#include "distb/report.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "distb/error.hpp"

namespace distb::report {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv(const char* header, const std::vector<std::vector<Cell>>& rows) {
  std::string out = header;
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      if (row[i]) out += format_number(*row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string rows3(const char* header, const std::vector<sim::Row>& rows) {
  std::vector<std::vector<Cell>> cells;
  for (const auto& r : rows) cells.push_back({r.x, r.distb, r.baseline});
  return csv(header, cells);
}

std::string rows2(const char* header, const std::vector<sim::Series2>& rows) {
  std::vector<std::vector<Cell>> cells;
  for (const auto& r : rows) cells.push_back({r.x, r.y});
  return csv(header, cells);
}

std::string single_mode(const char* header, const std::vector<sim::Series2>& rows, sim::Mode mode) {
  std::vector<std::vector<Cell>> cells;
  for (const auto& r : rows) {
    if (mode == sim::Mode::distb) cells.push_back({r.x, r.y, std::nullopt});
    else cells.push_back({r.x, std::nullopt, r.y});
  }
  return csv(header, cells);
}

}  // namespace

std::string throughput_csv(const std::vector<sim::Row>& rows) { return rows3(kThroughputHeader, rows); }
std::string bandwidth_csv(const std::vector<sim::Row>& rows) { return rows3(kBandwidthHeader, rows); }
std::string response_csv(const std::vector<sim::Row>& rows) { return rows3(kResponseHeader, rows); }
std::string gas_csv(const std::vector<sim::Series2>& rows) { return rows2(kGasHeader, rows); }
std::string cpu_csv(const std::vector<sim::Series2>& rows) { return rows2(kCpuHeader, rows); }

std::string throughput_csv(const sim::MetricsBundle& m) {
  return single_mode(kThroughputHeader, m.throughput, m.mode);
}
std::string bandwidth_csv(const sim::MetricsBundle& m) {
  return single_mode(kBandwidthHeader, m.bandwidth, m.mode);
}
std::string response_csv(const sim::MetricsBundle& m) {
  return single_mode(kResponseHeader, m.response, m.mode);
}

void OutputSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

void OutputSet::commit(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "cannot create output directory '" + dir.string() + "'");
  }
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files_) {
    const fs::path tmp = dir / ("." + name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) {
      staged.push_back(tmp);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
    }
    if (!out) {
      cleanup();
      throw Error(ErrorCode::io, "cannot write '" + (dir / name).string() + "'");
    }
  }
  for (const auto& f : files_) {
    if (fs::is_directory(dir / f.first)) {
      cleanup();
      throw Error(ErrorCode::io, "cannot replace directory '" + (dir / f.first).string() + "'");
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    fs::rename(staged[i], dir / files_[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorCode::io, "cannot move '" + files_[i].first + "' into place");
    }
  }
}

}  // namespace distb::report
