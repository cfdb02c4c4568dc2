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

#include "distb/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "distb/calibration.hpp"
#include "distb/ledger.hpp"
#include "distb/report.hpp"
#include "distb/simulator.hpp"

namespace distb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::invalid_argument:
      return config_error;
    case ErrorCode::integrity:
      return integrity_failure;
    case ErrorCode::io:
      return io_error;
    default:
      return simulation_error;
  }
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "distb: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "distb: " << e.what() << '\n';
    return simulation_error;
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::config, "not a number: '" + s + "'");
  }
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorCode::config, "not an integer: '" + s + "'");
  return v;
}

json manifest(const char* command, const sim::ScenarioConfig& cfg,
              const report::OutputSet& files) {
  json names = json::array();
  for (const auto& [name, _] : files.files()) names.push_back(name);
  names.push_back("manifest.json");
  return {{"command", command}, {"seed", cfg.seed}, {"config", sim::to_json(cfg)}, {"files", names}};
}

void require_valid_chain(const sim::MetricsBundle& m) {
  if (!m.chain_valid) throw Error(ErrorCode::integrity, "ledger failed validation at end of run");
}

double drop_pct(double base, double v) { return base > 0.0 ? (base - v) / base * 100.0 : 0.0; }

}  // namespace

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const auto start = to_int(colon[0]);
    const auto stop = to_int(colon[1]);
    const auto step = to_int(colon[2]);
    if (step <= 0 || stop < start) throw Error(ErrorCode::config, "bad range '" + text + "'");
    out.push_back(start);
    for (auto v = (start / step + 1) * step; v <= stop; v += step) out.push_back(v);
    return out;
  }
  for (const auto& p : split(text, ',')) out.push_back(to_int(p));
  if (out.empty()) throw Error(ErrorCode::config, "empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p));
  if (out.empty()) throw Error(ErrorCode::config, "empty list");
  return out;
}

chain::Stakes parse_stakes(const std::string& text) {
  chain::Stakes stakes;
  for (const auto& item : split(text, ',')) {
    const auto pos = item.rfind(':');
    if (pos == std::string::npos || pos == 0) {
      throw Error(ErrorCode::config, "stake '" + item + "' is not NAME:WEIGHT");
    }
    stakes[item.substr(0, pos)] = to_double(item.substr(pos + 1));
  }
  if (stakes.empty()) throw Error(ErrorCode::config, "no stakes given");
  return stakes;
}

sim::ScenarioConfig load_config(const std::string& path) {
  sim::ScenarioConfig cfg = path.empty() ? sim::ScenarioConfig{} : sim::parse_config(path);
  sim::apply_env_overrides(cfg);
  return cfg;
}

int run(const sim::ScenarioConfig& cfg, const fs::path& out_dir, std::ostream& out,
        std::ostream& err) {
  return guarded(err, [&] {
    const auto m = sim::run_scenario(cfg);
    require_valid_chain(m);
    report::OutputSet files;
    files.add("throughput.csv", report::throughput_csv(m));
    files.add("bandwidth.csv", report::bandwidth_csv(m));
    files.add("response.csv", report::response_csv(m));
    files.add("gas.csv", report::gas_csv(m.gas));
    files.add("cpu.csv", report::cpu_csv(m.cpu));
    if (cfg.mode == sim::Mode::distb) files.add("ledger.ndjson", chain::export_ndjson(m.blocks));
    auto man = manifest("run", cfg, files);
    man["metrics"] = sim::to_json(m);
    files.add("manifest.json", man.dump(2) + "\n");
    files.commit(out_dir);
    if (m.terminated_early) {
      err << "distb: network exhausted at " << m.ended_at << " ms; results are partial\n";
    }
    const auto& c = m.counters;
    out << sim::to_string(cfg.mode) << ": generated " << c.generated << ", delivered "
        << c.delivered << ", dropped " << c.dropped << ", in flight " << c.in_flight
        << ", committed txs " << c.committed_txs << "\n";
    return static_cast<int>(ok);
  });
}

int compare(const sim::ScenarioConfig& cfg, const fs::path& out_dir, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    auto dcfg = cfg;
    dcfg.mode = sim::Mode::distb;
    auto bcfg = cfg;
    bcfg.mode = sim::Mode::baseline;
    sim::MetricsBundle d, b;
    sim::parallel_for(2, 0, [&](std::size_t i) {
      if (i == 0) d = sim::run_scenario(dcfg);
      else b = sim::run_scenario(bcfg);
    });
    require_valid_chain(d);

    const double n = static_cast<double>(cfg.node_count);
    const std::vector<sim::Row> tp{{n, d.throughput.front().y, b.throughput.front().y}};
    std::vector<sim::Row> bw;
    if (!d.bandwidth.empty() && !b.bandwidth.empty()) {
      bw.push_back({d.bandwidth.front().x, d.bandwidth.front().y, b.bandwidth.front().y});
    }
    const auto resp = sim::measure_response_time(cfg.calibration, cfg.file_sizes_mb);

    const double base = cfg.calibration.bandwidth_base_mbps;
    double reduction = 0.0;
    for (const auto& r : resp) reduction += (r.baseline - r.distb) / r.baseline * 100.0;
    if (!resp.empty()) reduction /= static_cast<double>(resp.size());
    json summary = {
        {"node_count", cfg.node_count},
        {"response_reduction_pct", reduction},
        {"bandwidth_reference_mbps", base},
        {"bandwidth_drop_pct",
         {{"distb", bw.empty() ? 0.0 : drop_pct(base, bw.front().distb)},
          {"baseline", bw.empty() ? 0.0 : drop_pct(base, bw.front().baseline)}}},
        {"throughput_ratio",
         json::array({{n, tp.front().baseline > 0.0 ? tp.front().distb / tp.front().baseline : 0.0}})},
        {"benign_delivered_bytes",
         {{"distb", d.counters.benign_delivered_bytes}, {"baseline", b.counters.benign_delivered_bytes}}},
        {"terminated_early", d.terminated_early || b.terminated_early},
    };

    report::OutputSet files;
    files.add("throughput.csv", report::throughput_csv(tp));
    files.add("bandwidth.csv", report::bandwidth_csv(bw));
    files.add("response.csv", report::response_csv(resp));
    files.add("gas.csv", report::gas_csv(d.gas));
    std::vector<std::vector<report::Cell>> cpu_rows;
    for (std::size_t i = 0; i < d.cpu.size(); ++i) {
      cpu_rows.push_back({d.cpu[i].x, d.cpu[i].y,
                          i < b.cpu.size() ? report::Cell(b.cpu[i].y) : std::nullopt});
    }
    files.add("cpu.csv", report::csv("time_s,distb_cpu_pct,baseline_cpu_pct", cpu_rows));
    files.add("summary.json", summary.dump(2) + "\n");
    files.add("ledger.ndjson", chain::export_ndjson(d.blocks));
    auto man = manifest("compare", cfg, files);
    man["metrics"] = {{"distb", sim::to_json(d)}, {"baseline", sim::to_json(b)}};
    files.add("manifest.json", man.dump(2) + "\n");
    files.commit(out_dir);
    out << summary.dump(2) << "\n";
    return static_cast<int>(ok);
  });
}

int sweep(const sim::ScenarioConfig& cfg, const SweepSpec& spec, const fs::path& out_dir,
          std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto tp = sim::measure_throughput(cfg, spec.nodes, spec.threads);
    const auto bw = sim::measure_bandwidth_under_attack(cfg, spec.rates_kps, spec.threads);
    const auto resp =
        sim::measure_response_time(cfg.calibration, spec.sizes_mb.value_or(cfg.file_sizes_mb));
    const auto gas =
        sim::measure_gas(cfg.calibration.gas, spec.tx_counts.value_or(cfg.gas_tx_counts));
    const auto cpu = sim::measure_cpu_flooding(cfg);

    report::OutputSet files;
    files.add("throughput.csv", report::throughput_csv(tp));
    files.add("bandwidth.csv", report::bandwidth_csv(bw));
    files.add("response.csv", report::response_csv(resp));
    files.add("gas.csv", report::gas_csv(gas));
    files.add("cpu.csv", report::cpu_csv(cpu));
    auto man = manifest("sweep", cfg, files);
    man["sweep"] = {{"nodes", spec.nodes}, {"rates_kps", spec.rates_kps}};
    files.add("manifest.json", man.dump(2) + "\n");
    files.commit(out_dir);
    out << "sweep: " << tp.size() << " node counts, " << bw.size() << " arrival rates, "
        << resp.size() << " file sizes -> " << out_dir.string() << "\n";
    return static_cast<int>(ok);
  });
}

int calibrate(const sim::ScenarioConfig& cfg, const fs::path& out_file, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    auto rep = calib::fit_from_tables();
    auto probe = cfg;
    probe.calibration = rep.calibration;
    rep.calibration.cpu_kappa = sim::fit_cpu_kappa(probe, rep.cpu_peak_pct);

    const auto& c = rep.calibration;
    char line[160];
    auto row = [&](const char* name, double v) {
      std::snprintf(line, sizeof line, "  %-28s %.10g\n", name, v);
      out << line;
    };
    out << "constants\n";
    row("gas_base", c.gas.base);
    row("gas_per_tx", c.gas.per_tx);
    row("response_alpha_distb", c.response_alpha_distb);
    row("response_beta_distb", c.response_beta_distb);
    row("response_alpha_core", c.response_alpha_core);
    row("response_beta_core", c.response_beta_core);
    row("throughput_slope_distb", rep.throughput_line_distb.slope);
    row("throughput_slope_baseline", rep.throughput_line_baseline.slope);
    row("bandwidth_base_mbps", c.bandwidth_base_mbps);
    row("attack_share_coeff", c.attack_share_coeff);
    row("attack_share_exponent", c.attack_share_exponent);
    row("drop_overhead", c.drop_overhead);
    row("cpu_idle_pct", c.cpu_idle_pct);
    row("cpu_kappa", c.cpu_kappa);
    out << "residuals\n";
    row("gas max rel", rep.gas_max_rel_error);
    row("response max rel (distb)", rep.response_max_rel_error_distb);
    row("response max rel (core)", rep.response_max_rel_error_core);
    row("throughput max rel", rep.throughput_max_rel_error);
    row("throughput line max rel", rep.throughput_line_max_rel_error);
    row("bandwidth max abs (distb)", rep.bandwidth_max_abs_error_distb);
    row("bandwidth max abs (base)", rep.bandwidth_max_abs_error_baseline);

    report::OutputSet files;
    files.add(out_file.filename().string(),
              json{{"calibration", calib::to_json(c)}}.dump(2) + "\n");
    files.commit(out_file.has_parent_path() ? out_file.parent_path() : fs::path("."));
    out << "wrote " << out_file.string() << "\n";
    return static_cast<int>(ok);
  });
}

int validate_chain(const fs::path& ledger, const std::optional<chain::Stakes>& stakes,
                   std::uint32_t min_difficulty, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    std::ifstream in(ledger, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot read '" + ledger.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<chain::Block> blocks;
    try {
      blocks = chain::import_ndjson(ss.str());
    } catch (const Error& e) {
      throw Error(ErrorCode::io, "cannot parse '" + ledger.string() + "': " + e.what());
    }
    const auto consensus =
        stakes ? chain::Consensus::pos(*stakes) : chain::Consensus::pow(min_difficulty);
    const auto check = chain::validate_chain(blocks, consensus);
    if (!check.valid) {
      out << "invalid: first bad index " << check.first_bad_index << ": " << check.reason << "\n";
      return integrity_failure;
    }
    out << "valid: " << blocks.size() << " blocks, tip " << chain::to_hex(blocks.back().hash) << "\n";
    return ok;
  });
}

int tables(std::ostream& out) {
  out << calib::embedded_tables().dump(2) << "\n";
  return ok;
}

}  // namespace distb::cli
