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

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "distb/calibration.hpp"
#include "distb/clustering.hpp"
#include "distb/error.hpp"
#include "distb/ledger.hpp"
#include "distb/report.hpp"
#include "distb/simulator.hpp"
#include "oracles.hpp"
#include "tamper.hpp"

using namespace distb;

namespace {

/// Collects the first few failure messages of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
  bool ok() const { return failures.empty(); }
};

std::string fmt(double v) { return report::format_number(v); }

bool within_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

// -- 1 ----------------------------------------------------------------------

std::string chs(Check& c) {
  using clustering::NodeId;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(mix_seed(seed, 101));
    const auto n = rng.uniform_int(1, 10);
    const auto s = topology::generate_topology(n, rng.uniform(150, 1500), seed);
    auto sorted = clustering::sort_nodes(s);
    std::vector<oracle::OracleCluster> got;
    for (const auto& cl : clustering::select_cluster_heads(sorted).clusters) {
      got.push_back({cl.head_id, cl.member_ids});
    }
    c.expect(got == oracle::cluster_heads(s), "oracle mismatch, seed " + std::to_string(seed));
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(mix_seed(seed, 202));
    const auto n = rng.uniform_int(1, 100);
    auto s = clustering::sort_nodes(topology::generate_topology(n, rng.uniform(200, 2500), seed));
    const auto cs = clustering::select_cluster_heads(s);
    std::map<NodeId, const topology::Node*> by_id;
    for (const auto& node : s.nodes) by_id[node.id] = &node;
    std::set<NodeId> seen;
    bool ok = true;
    for (const auto& cl : cs.clusters) {
      ok &= seen.insert(cl.head_id).second;
      const auto* h = by_id[cl.head_id];
      for (auto m : cl.member_ids) {
        ok &= seen.insert(m).second;
        ok &= topology::distance(h->location, by_id[m]->location) < h->area;
        ok &= h->energy >= by_id[m]->energy;
      }
    }
    ok &= seen.size() == s.nodes.size();
    c.expect(ok, "invariant broken, seed " + std::to_string(seed));
  }
  return "200 oracle sets (n <= 10), 1000 invariant sets (n <= 100)";
}

// -- 2 ----------------------------------------------------------------------

std::string throughput(Check& c) {
  const auto table = calib::throughput_table();
  std::vector<std::int64_t> nodes;
  for (const auto& r : table) nodes.push_back(static_cast<std::int64_t>(r.x));
  const auto rows = sim::measure_throughput(sim::ScenarioConfig{}, nodes);
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& t = table[i];
    worst = std::max({worst, std::abs(r.distb - t.a) / t.a, std::abs(r.baseline - t.b) / t.b});
    c.expect(within_rel(r.distb, t.a, 0.15),
             "n=" + fmt(r.x) + " distb " + fmt(r.distb) + " vs " + fmt(t.a));
    c.expect(within_rel(r.baseline, t.b, 0.15),
             "n=" + fmt(r.x) + " baseline " + fmt(r.baseline) + " vs " + fmt(t.b));
    if (i > 0) {
      c.expect(r.distb >= rows[i - 1].distb, "distb not monotone at n=" + fmt(r.x));
      c.expect(r.baseline >= rows[i - 1].baseline, "baseline not monotone at n=" + fmt(r.x));
    }
    if (r.x >= 5) c.expect(r.distb >= r.baseline, "distb < baseline at n=" + fmt(r.x));
  }
  return "13 rows, worst relative error " + fmt(std::round(worst * 1000) / 10) + "%";
}

// -- 3 ----------------------------------------------------------------------

std::string bandwidth(Check& c) {
  const auto table = calib::bandwidth_table();
  std::vector<double> rates;
  for (const auto& r : table) rates.push_back(r.x);
  const sim::ScenarioConfig base;
  const auto rows = sim::measure_bandwidth_under_attack(base, rates);
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& t = table[i];
    worst = std::max({worst, std::abs(r.distb - t.a), std::abs(r.baseline - t.b)});
    c.expect(std::abs(r.distb - t.a) <= 0.3,
             "rate " + fmt(r.x) + " distb " + fmt(r.distb) + " vs " + fmt(t.a));
    c.expect(std::abs(r.baseline - t.b) <= 0.3,
             "rate " + fmt(r.x) + " baseline " + fmt(r.baseline) + " vs " + fmt(t.b));
  }
  const double ref = base.calibration.bandwidth_base_mbps;
  const double dd = (ref - rows.back().distb) / ref * 100;
  const double bd = (ref - rows.back().baseline) / ref * 100;
  c.expect(rows.back().x == 32, "last rate is not 32");
  c.expect(dd <= 15, "distb drop " + fmt(dd) + "%");
  c.expect(bd >= 70, "baseline drop " + fmt(bd) + "%");
  char buf[160];
  std::snprintf(buf, sizeof buf, "drop at 32k/s: distb %.1f%%, baseline %.1f%%; worst row %.3f Mbps",
                dd, bd, worst);
  return buf;
}

// -- 4 ----------------------------------------------------------------------

std::string response(Check& c) {
  const auto table = calib::response_table();
  std::vector<double> sizes;
  for (const auto& r : table) sizes.push_back(r.x);
  const auto rows = sim::measure_response_time(calib::default_calibration(), sizes);
  double reduction = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& t = table[i];
    c.expect(within_rel(r.distb, t.a, 0.15),
             fmt(r.x) + " Mb distb " + fmt(r.distb) + " vs " + fmt(t.a));
    c.expect(within_rel(r.baseline, t.b, 0.15),
             fmt(r.x) + " Mb core " + fmt(r.baseline) + " vs " + fmt(t.b));
    c.expect(r.distb < r.baseline, fmt(r.x) + " Mb: distb not faster");
    reduction += (r.baseline - r.distb) / r.baseline * 100;
  }
  reduction /= static_cast<double>(rows.size());
  c.expect(reduction >= 5, "average reduction " + fmt(reduction) + "%");
  char buf[96];
  std::snprintf(buf, sizeof buf, "10 rows, average reduction %.1f%%", reduction);
  return buf;
}

// -- 5 ----------------------------------------------------------------------

std::string gas(Check& c) {
  const auto table = calib::gas_table();
  const auto& model = calib::default_calibration().gas;
  double worst = 0;
  for (const auto& t : table) {
    const auto g = static_cast<double>(chain::gas_for(static_cast<std::int64_t>(t.x), model));
    worst = std::max(worst, std::abs(g - t.y) / t.y);
    c.expect(within_rel(g, t.y, 0.10), fmt(t.x) + " txs: " + fmt(g) + " vs " + fmt(t.y));
  }
  c.expect(chain::gas_for(0, model) == 0, "gas(0) != 0");
  for (std::int64_t n = 1; n <= 100; ++n) {
    c.expect(chain::gas_for(n, model) > chain::gas_for(n - 1, model),
             "not strictly increasing at " + std::to_string(n));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "8 rows, worst relative error %.1f%%", worst * 100);
  return buf;
}

// -- 6 ----------------------------------------------------------------------

std::string cpu(Check& c) {
  const auto series = sim::measure_cpu_flooding(sim::ScenarioConfig{});
  sim::Series2 peak{0, -1};
  for (const auto& s : series) {
    if (s.y > peak.y) peak = s;
  }
  c.expect(std::abs(peak.y - 27) <= 5, "peak " + fmt(peak.y) + "%");
  c.expect(peak.x >= 1.2 - 1e-9 && peak.x <= 2.0 + 1e-9, "peak at " + fmt(peak.x) + " s");
  bool found = false;
  double at32 = 0;
  for (const auto& s : series) {
    if (std::abs(s.x - 3.2) < 1e-9) {
      found = true;
      at32 = s.y;
    }
  }
  c.expect(found, "no sample at 3.2 s");
  c.expect(at32 <= 5, "3.2 s reads " + fmt(at32) + "%");
  char buf[96];
  std::snprintf(buf, sizeof buf, "peak %.1f%% at %.1f s, %.1f%% at 3.2 s", peak.y, peak.x, at32);
  return buf;
}

// -- 7 ----------------------------------------------------------------------

bool pow_ok(const chain::Block& b, std::uint32_t min_bits) {
  const auto* seal = std::get_if<chain::PowSeal>(&b.sealer);
  if (!seal || seal->difficulty < min_bits) return false;
  const auto h = chain::sha256(oracle::header_bytes(b));
  return h == b.hash && oracle::zero_bits(h) >= static_cast<int>(min_bits);
}

std::string integrity(Check& c) {
  std::size_t blocks_checked = 0;
  std::vector<chain::Block> sample;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    sim::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.node_count = 10;
    cfg.sim_time_ms = 8000;
    const auto m = sim::run_scenario(cfg);
    const auto s = std::to_string(seed);
    c.expect(m.chain_valid, "seed " + s + ": chain invalid");
    c.expect(chain::validate_chain(m.blocks, cfg.consensus).valid, "seed " + s + ": export invalid");
    std::set<chain::Digest> ids;
    for (const auto& b : m.blocks) {
      c.expect(pow_ok(b, 8), "seed " + s + ": block " + std::to_string(b.index) + " fails PoW");
      ++blocks_checked;
      for (const auto& tx : b.txs) {
        c.expect(ids.insert(tx.tx_id).second, "seed " + s + ": tx committed twice");
      }
    }
    c.expect(m.counters.committed_txs == m.counters.txs_admitted_valid + m.counters.txs_promoted,
             "seed " + s + ": committed count mismatch");
    if (seed == 1) sample = m.blocks;
  }

  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    auto blocks = sample;
    const auto flip = tamper::corrupt(blocks, rng);
    const auto check = chain::validate_chain(blocks, chain::Consensus::pow(8));
    c.expect(!check.valid && check.first_bad_index == flip.block,
             "tamper " + flip.field + " in block " + std::to_string(flip.block) + " reported at " +
                 std::to_string(check.first_bad_index));
  }

  // waiting room: after every sweep no entry is older than the timeout, and
  // nothing younger was thrown away
  Rng prng(99);
  const chain::Millis timeout = 500;
  chain::Ledger ledger(chain::Consensus::pow(1));
  const chain::ContractState nobody;
  std::map<chain::Digest, chain::Millis> entered;
  chain::Millis now = 0;
  for (int step = 0; step < 400; ++step) {
    now += prng.uniform_int(0, 120);
    if (prng.uniform() < 0.6) {
      auto tx = chain::make_transaction("ghost-" + std::to_string(step), "bs", {1}, now);
      ledger.admit_or_park(tx, chain::verify_transaction(tx, nobody), now);
      entered[tx.tx_id] = now;
    } else {
      const auto r = ledger.expire_pending(now, nobody, timeout);
      for (const auto& id : r.discarded) {
        c.expect(now - entered.at(id) > timeout, "pending entry discarded too early");
      }
      for (const auto& e : ledger.pending()) {
        c.expect(now - e.entered_at <= timeout, "stale pending entry survived a sweep");
      }
    }
  }

  // a duplicate tx_id is refused at admission and at append
  chain::Ledger dup(chain::Consensus::pow(8));
  const auto tx = chain::make_transaction("s-1", "bs", {7}, 1);
  dup.admit_or_park(tx, chain::Verdict::valid(), 1);
  dup.append_block(dup.seal_next(2, 8));
  bool refused_admit = false, refused_append = false;
  try {
    dup.admit_or_park(tx, chain::Verdict::valid(), 3);
  } catch (const Error& e) {
    refused_admit = e.code() == ErrorCode::duplicate_transaction;
  }
  try {
    dup.append_block(chain::mine_block(2, {tx}, dup.tip_hash(), 8, 4));
  } catch (const Error& e) {
    refused_append = e.code() == ErrorCode::duplicate_transaction;
  }
  c.expect(refused_admit && refused_append, "duplicate transaction accepted");
  c.expect(dup.committed_tx_count() == 1, "duplicate committed");

  return "100 runs valid, " + std::to_string(blocks_checked) + " PoW blocks re-verified, 100 tamper trials";
}

// -- 8 ----------------------------------------------------------------------

std::string csv_bundle(const sim::MetricsBundle& m) {
  return report::throughput_csv(m) + report::bandwidth_csv(m) + report::response_csv(m) +
         report::gas_csv(m.gas) + report::cpu_csv(m.cpu);
}

std::string determinism(Check& c) {
  std::size_t runs = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto mode : {sim::Mode::distb, sim::Mode::baseline}) {
      auto cfg = sim::bandwidth_scenario(sim::ScenarioConfig{}, 16, mode);
      cfg.seed = seed;
      cfg.sim_time_ms = 10000;
      cfg.attack->stop_ms = 8000;
      const auto a = sim::run_scenario(cfg);
      const auto b = sim::run_scenario(cfg);
      runs += 2;
      const auto tag = "seed " + std::to_string(seed) + " " + sim::to_string(mode);
      c.expect(csv_bundle(a) == csv_bundle(b), tag + ": CSVs differ");
      c.expect(sim::to_json(a) == sim::to_json(b), tag + ": metrics differ");
      c.expect(a.conserves_packets() && b.conserves_packets(), tag + ": packets not conserved");
    }
  }
  return std::to_string(runs) + " runs, byte-identical pairs, conservation held";
}

// -- 9 ----------------------------------------------------------------------

std::string pos(Check& c) {
  const chain::Stakes stakes{{"A", 3}, {"B", 1}, {"Z", 0}};
  int a = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto v = chain::select_validator(stakes, static_cast<std::uint64_t>(i));
    c.expect(v != "Z", "zero-stake validator selected");
    a += v == "A" ? 1 : 0;
  }
  const double f = static_cast<double>(a) / n;
  c.expect(std::abs(f - 0.75) <= 0.02, "frequency of A " + fmt(f));
  char buf[64];
  std::snprintf(buf, sizeof buf, "A drawn %.4f of %d", f, n);
  return buf;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {"cluster-head oracle equivalence and invariants", chs},
      {"throughput table reproduction", throughput},
      {"bandwidth under attack", bandwidth},
      {"response time", response},
      {"gas model", gas},
      {"cpu during flooding", cpu},
      {"ledger integrity properties", integrity},
      {"determinism and packet conservation", determinism},
      {"stake-weighted validator selection", pos},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::string detail;
    try {
      detail = criteria[i].run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].name,
                detail.c_str());
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
    failed += c.ok() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
