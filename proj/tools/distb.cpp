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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "distb/cli.hpp"

namespace {

int with_config(const std::string& path, const auto& fn) {
  distb::sim::ScenarioConfig cfg;
  try {
    cfg = distb::cli::load_config(path);
  } catch (const distb::Error& e) {
    std::cerr << "distb: " << distb::to_string(e.code()) << ": " << e.what() << '\n';
    return distb::cli::exit_code_for(e.code());
  }
  return fn(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace distb;
  CLI::App app{"IoT network simulator: cluster heads, SDN flood mitigation and a hash-chained ledger"};
  app.require_subcommand(1);
  app.footer("Environment: DISTB_SEED overrides the config seed.");

  std::string config;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "run one scenario and write CSVs plus manifest.json");
  run->add_option("-c,--config", config, "scenario JSON (built-in defaults when omitted)");
  run->add_option("-o,--out", out_dir, "output directory")->required();

  auto* cmp = app.add_subcommand("compare", "run DistB and the OF baseline with the same seed");
  cmp->add_option("-c,--config", config, "scenario JSON");
  cmp->add_option("-o,--out", out_dir, "output directory")->required();

  cli::SweepSpec spec;
  std::string nodes, rates, sizes, tx_counts;
  auto* swp = app.add_subcommand("sweep", "regenerate every evaluation series");
  swp->add_option("-c,--config", config, "base scenario JSON");
  swp->add_option("-o,--out", out_dir, "output directory")->required();
  swp->add_option("--nodes", nodes, "node counts, e.g. 1:60:5 or 1,5,10");
  swp->add_option("--rates", rates, "attack arrival rates in thousand packets/s");
  swp->add_option("--sizes", sizes, "file sizes in Mb");
  swp->add_option("--tx-counts", tx_counts, "batch sizes for the gas table");
  swp->add_option("--threads", spec.threads, "worker threads (0 = all cores)");

  std::string calib_out = "calibration.json";
  auto* cal = app.add_subcommand("calibrate", "re-fit model constants from the embedded tables");
  cal->add_option("-c,--config", config, "base scenario JSON for the CPU fit");
  cal->add_option("-o,--out", calib_out, "calibration JSON to write")->capture_default_str();

  std::string ledger_path, stakes;
  std::uint32_t min_difficulty = 8;
  auto* val = app.add_subcommand("validate-chain", "check an exported ledger");
  val->add_option("ledger", ledger_path, "ledger.ndjson")->required();
  val->add_option("--stakes", stakes, "PoS stakes NAME:WEIGHT,... (PoW when omitted)");
  val->add_option("--min-difficulty", min_difficulty, "minimum PoW bits")->capture_default_str();

  auto* tab = app.add_subcommand("tables", "print the embedded reference tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::config_error;
  }

  if (*run) {
    return with_config(config, [&](const auto& cfg) { return cli::run(cfg, out_dir, std::cout, std::cerr); });
  }
  if (*cmp) {
    return with_config(config,
                       [&](const auto& cfg) { return cli::compare(cfg, out_dir, std::cout, std::cerr); });
  }
  if (*swp) {
    try {
      if (!nodes.empty()) spec.nodes = cli::parse_int_list(nodes);
      if (!rates.empty()) spec.rates_kps = cli::parse_double_list(rates);
      if (!sizes.empty()) spec.sizes_mb = cli::parse_double_list(sizes);
      if (!tx_counts.empty()) spec.tx_counts = cli::parse_int_list(tx_counts);
    } catch (const Error& e) {
      std::cerr << "distb: " << e.what() << '\n';
      return cli::config_error;
    }
    return with_config(
        config, [&](const auto& cfg) { return cli::sweep(cfg, spec, out_dir, std::cout, std::cerr); });
  }
  if (*cal) {
    return with_config(config,
                       [&](const auto& cfg) { return cli::calibrate(cfg, calib_out, std::cout, std::cerr); });
  }
  if (*val) {
    std::optional<chain::Stakes> parsed;
    if (!stakes.empty()) {
      try {
        parsed = cli::parse_stakes(stakes);
      } catch (const Error& e) {
        std::cerr << "distb: " << e.what() << '\n';
        return cli::config_error;
      }
    }
    return cli::validate_chain(ledger_path, parsed, min_difficulty, std::cout, std::cerr);
  }
  if (*tab) return cli::tables(std::cout);
  return cli::config_error;
}
