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

#include "distb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "distb/error.hpp"
#include "distb/storage.hpp"

namespace distb::sim {

namespace {

constexpr sdn::EndpointId kBaseStation = -1;

double hop_ms(const ScenarioConfig& cfg, std::int32_t size) {
  // bits / (Mbit/s * 1000) = ms
  return cfg.link.hop_delay_ms + static_cast<double>(size) * 8.0 / (cfg.data_rate_mbps * 1000.0);
}

void sort_events(std::vector<Event>& evs) {
  std::sort(evs.begin(), evs.end(), [](const Event& a, const Event& b) {
    if (a.packet.created_at != b.packet.created_at) return a.packet.created_at < b.packet.created_at;
    return a.packet.id < b.packet.id;
  });
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::packet_arrival: return "packet-arrival";
    case EventKind::mine_tick: return "mine-tick";
    case EventKind::pending_sweep: return "pending-sweep";
    case EventKind::detector_tick: return "detector-tick";
    case EventKind::attack_start: return "attack-start";
    case EventKind::attack_stop: return "attack-stop";
    case EventKind::round_tick: return "round-tick";
    case EventKind::measurement_tick: return "measurement-tick";
  }
  return "unknown";
}

void EventQueue::push(Event ev) {
  ev.seq = next_seq_++;
  if (ev.kind == EventKind::packet_arrival) ++packets_;
  heap_.push(std::move(ev));
}

Event EventQueue::pop() {
  Event ev = heap_.top();
  heap_.pop();
  if (ev.kind == EventKind::packet_arrival) --packets_;
  return ev;
}

std::vector<Event> generate_traffic(const topology::NodeSet& nodes,
                                    const clustering::ClusterSet& clusters, double rate_pps,
                                    SimTime t0, SimTime t1, const ScenarioConfig& cfg, Rng& rng,
                                    std::uint64_t& next_id) {
  if (!(rate_pps > 0.0) || !std::isfinite(rate_pps)) {
    throw Error(ErrorCode::invalid_argument, "generate_traffic: rate must be > 0");
  }
  const double per_ms = rate_pps / 1000.0;
  std::vector<Event> out;
  for (const auto& node : nodes.nodes) {
    if (node.depleted()) continue;
    const auto head = clusters.head_of(node.id);
    if (head < 0) continue;
    for (SimTime t = t0 + rng.exponential(per_ms); t < t1; t += rng.exponential(per_ms)) {
      Event ev;
      ev.kind = EventKind::packet_arrival;
      ev.packet.id = next_id++;
      ev.packet.src = node.id;
      ev.packet.dst = kBaseStation;
      ev.packet.size =
          static_cast<std::int32_t>(rng.uniform_int(cfg.packet_size_min, cfg.packet_size_max));
      ev.packet.kind = sdn::PacketKind::sensor_data;
      ev.packet.created_at = t;
      ev.stage = head == node.id ? Stage::at_gateway : Stage::at_head;
      ev.gateway = static_cast<std::int32_t>(head % cfg.gateways);
      ev.at = t + hop_ms(cfg, ev.packet.size);
      out.push_back(ev);
    }
  }
  sort_events(out);
  return out;
}

double attack_multiplier(const AttackConfig& a, std::int32_t source, SimTime t) {
  if (t < a.start_ms || t >= a.stop_ms) return 0.0;
  if (a.ramp_max_ms <= 0.0) return a.multiplier;
  const double span =
      a.sources > 1 ? a.ramp_min_ms + (a.ramp_max_ms - a.ramp_min_ms) * source / (a.sources - 1)
                    : a.ramp_min_ms;
  if (span <= 0.0) return a.multiplier;
  const double frac = std::min(1.0, (t - a.start_ms) / span);
  return 1.0 + (a.multiplier - 1.0) * frac;
}

std::vector<Event> inject_attack(const ScenarioConfig& cfg, SimTime t0, SimTime t1, Rng& rng,
                                 std::uint64_t& next_id) {
  std::vector<Event> out;
  if (!cfg.attack) return out;
  const auto& a = *cfg.attack;
  if (!(a.stop_ms > a.start_ms) || a.start_ms < 0.0 || a.sources < 1 || !(a.multiplier > 0.0)) {
    throw Error(ErrorCode::config, "attack: malformed window");
  }
  const SimTime lo = std::max(t0, a.start_ms);
  const SimTime hi = std::min(t1, a.stop_ms);
  if (lo >= hi) return out;
  // Thinning against the peak rate keeps ramped sources exact Poisson.
  const double peak = std::max(1.0, a.multiplier);
  const double per_ms = cfg.sensor_rate_pps * peak / 1000.0;
  for (std::int32_t k = 0; k < a.sources; ++k) {
    for (SimTime t = lo + rng.exponential(per_ms); t < hi; t += rng.exponential(per_ms)) {
      const double keep = attack_multiplier(a, k, t) / peak;
      if (keep < 1.0 && rng.uniform() >= keep) continue;
      Event ev;
      ev.kind = EventKind::packet_arrival;
      ev.packet.id = next_id++;
      ev.packet.src = cfg.node_count + k;
      ev.packet.dst = kBaseStation;
      ev.packet.size =
          static_cast<std::int32_t>(rng.uniform_int(cfg.packet_size_min, cfg.packet_size_max));
      ev.packet.kind = sdn::PacketKind::attack;
      ev.packet.created_at = t;
      ev.stage = Stage::at_gateway;
      ev.gateway = k % cfg.gateways;
      ev.at = t + hop_ms(cfg, ev.packet.size);
      out.push_back(ev);
    }
  }
  sort_events(out);
  return out;
}

namespace {

std::string sensor_name(std::int64_t id) { return "s-" + std::to_string(id); }

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        traffic_rng_(mix_seed(cfg.seed, 1)),
        attack_rng_(mix_seed(cfg.seed, 2)),
        threshold_(sdn::flood_threshold(cfg.sensor_rate_pps, cfg.detector.window_ms,
                                        cfg.detector.threshold_factor,
                                        cfg.detector.min_threshold)),
        avail_mbps_(cfg.calibration.bandwidth_base_mbps) {
    validate(cfg);
    nodes_ = topology::generate_topology(cfg.node_count, cfg.area_side_m, cfg.seed, cfg.placement);
    for (std::int32_t i = 0; i < cfg.controllers; ++i) {
      sdn::ControllerState c;
      c.id = i;
      controllers_.push_back(std::move(c));
    }
    out_.mode = cfg.mode;
    if (distb()) {
      ledger_.emplace(cfg.consensus, 0);
      for (const auto& n : nodes_.nodes) {
        if (n.id >= cfg.chain.unregistered_sensors) contract_.register_sensor(sensor_name(n.id));
      }
    }
  }

  MetricsBundle run() {
    schedule_initial();
    const SimTime horizon = cfg_.sim_time_ms;
    SimTime now = 0.0;
    while (!queue_.empty() && queue_.top().at <= horizon && !out_.terminated_early) {
      Event ev = queue_.pop();
      now = ev.at;
      ++out_.counters.events;
      dispatch(ev);
    }
    out_.ended_at = out_.terminated_early ? now : horizon;
    finish();
    return std::move(out_);
  }

 private:
  bool distb() const { return cfg_.mode == Mode::distb; }

  void tick(EventKind kind, SimTime at, std::int32_t channel = 0) {
    if (at > cfg_.sim_time_ms) return;
    Event ev;
    ev.kind = kind;
    ev.at = at;
    ev.channel = channel;
    queue_.push(ev);
  }

  void schedule_initial() {
    tick(EventKind::round_tick, 0.0);
    tick(EventKind::measurement_tick, cfg_.measurement_period_ms, 0);
    tick(EventKind::measurement_tick, cfg_.cpu_sample_ms, 1);
    if (cfg_.attack) {
      tick(EventKind::attack_start, cfg_.attack->start_ms);
      tick(EventKind::attack_stop, cfg_.attack->stop_ms);
    }
    if (distb()) {
      tick(EventKind::detector_tick, cfg_.detector.period_ms);
      tick(EventKind::mine_tick, cfg_.chain.block_interval_ms);
      tick(EventKind::pending_sweep, cfg_.chain.sweep_period_ms);
    }
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::packet_arrival: on_packet(ev); break;
      case EventKind::round_tick: on_round(ev.at); break;
      case EventKind::measurement_tick: on_measure(ev.at, ev.channel); break;
      case EventKind::detector_tick: on_detect(ev.at); break;
      case EventKind::mine_tick:
        if (!ledger_->queued().empty()) mine(ev.at, false);
        tick(EventKind::mine_tick, ev.at + cfg_.chain.block_interval_ms);
        break;
      case EventKind::pending_sweep: on_sweep(ev.at); break;
      case EventKind::attack_start:
      case EventKind::attack_stop:
        // markers only; attack packets are generated with each round's traffic
        break;
    }
  }

  // -- clustering and traffic ----------------------------------------------

  void on_round(SimTime now) {
    clustering::RoundResult rr;
    try {
      rr = clustering::run_round(nodes_, cfg_.energy, round_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::exhausted_network) throw;
      out_.terminated_early = true;
      return;
    }
    nodes_ = std::move(rr.nodes);
    clusters_ = std::move(rr.clusters);
    round_ = clusters_.round;
    ++out_.counters.rounds;
    live_ = 0;
    for (const auto& n : nodes_.nodes) live_ += n.depleted() ? 0 : 1;
    const auto& profile =
        distb() ? cfg_.calibration.throughput_distb : cfg_.calibration.throughput_baseline;
    capacity_kbps_ = std::max(0.0, profile.at(static_cast<double>(live_)));

    const SimTime end = std::min(now + cfg_.round_period_ms, cfg_.sim_time_ms);
    auto benign = generate_traffic(nodes_, clusters_, cfg_.sensor_rate_pps, now, end, cfg_,
                                   traffic_rng_, next_packet_id_);
    for (auto& ev : benign) {
      ++out_.counters.generated;
      ++out_.counters.benign_generated;
      queue_.push(std::move(ev));
    }
    auto attack = inject_attack(cfg_, now, end, attack_rng_, next_packet_id_);
    for (auto& ev : attack) {
      ++out_.counters.generated;
      ++out_.counters.attack_generated;
      queue_.push(std::move(ev));
    }
    tick(EventKind::round_tick, now + cfg_.round_period_ms);
  }

  // -- forwarding ----------------------------------------------------------

  void on_packet(const Event& ev) {
    switch (ev.stage) {
      case Stage::at_head: {
        Event next = ev;
        next.stage = Stage::at_gateway;
        next.at = ev.at + hop_ms(cfg_, ev.packet.size);
        queue_.push(next);
        return;
      }
      case Stage::at_gateway: at_gateway(ev); return;
      case Stage::uplink_done: uplink_done(ev); return;
    }
  }

  void at_gateway(const Event& ev) {
    const Packet& p = ev.packet;
    const SimTime now = ev.at;
    auto& ctrl = controllers_[static_cast<std::size_t>(sdn::controller_for(p.src, cfg_.controllers))];
    const auto action = sdn::match_packet(ctrl.flow_table, p);
    const bool attack = p.kind == sdn::PacketKind::attack;
    if (std::holds_alternative<sdn::Drop>(action)) {
      ++out_.counters.dropped;
      ++out_.counters.blocked;
      if (attack) {
        ++out_.counters.attack_blocked;
        ++tick_blocked_attack_;
      }
      return;
    }
    if (std::holds_alternative<sdn::ToController>(action)) {
      // Reactive install: the controller answers the first packet of a flow
      // with a forwarding rule toward the base station.
      sdn::FlowRule rule;
      rule.match.src = p.src;
      rule.action = sdn::Forward{kBaseStation};
      rule.priority = 1;
      sdn::install_rule(ctrl, rule, now);
    }
    if (distb()) ctrl.traffic_window.record(p.src, now);
    if (attack) {
      // Flood traffic is absorbed at the victim; its cost shows up as lost
      // capacity and CPU load.
      ++out_.counters.delivered;
      ++out_.counters.attack_delivered;
      ++tick_unblocked_attack_;
      ++cpu_unblocked_attack_;
      return;
    }
    const auto size = static_cast<std::int64_t>(p.size);
    if (uplink_bytes_ + size > cfg_.link.queue_limit_bytes) {
      ++out_.counters.dropped;
      return;
    }
    uplink_bytes_ += size;
    uplink_.push_back(p);
    if (!busy_) start_service(now);
  }

  void start_service(SimTime now) {
    Packet p = uplink_.front();
    uplink_.pop_front();
    const double share = std::max(0.01, avail_mbps_ / cfg_.calibration.bandwidth_base_mbps);
    const double rate_kbps = std::max(1e-6, capacity_kbps_ * share);
    Event ev;
    ev.kind = EventKind::packet_arrival;
    ev.stage = Stage::uplink_done;
    ev.packet = p;
    ev.at = now + static_cast<double>(p.size) * 8.0 / rate_kbps;
    queue_.push(ev);
    busy_ = true;
  }

  void uplink_done(const Event& ev) {
    const Packet& p = ev.packet;
    uplink_bytes_ -= p.size;
    busy_ = false;
    ++out_.counters.delivered;
    ++out_.counters.benign_delivered;
    out_.counters.benign_delivered_bytes += static_cast<std::uint64_t>(p.size);
    if (distb()) submit(p, ev.at);
    if (!uplink_.empty()) start_service(ev.at);
  }

  // -- detection -----------------------------------------------------------

  void on_detect(SimTime now) {
    const sdn::DetectorConfig dc{cfg_.detector.window_ms, threshold_};
    for (auto& ctrl : controllers_) {
      ctrl.traffic_window.evict_through(now - cfg_.detector.window_ms);
      for (auto src : sdn::detect_flood(ctrl, now, dc)) {
        if (ctrl.blocked.contains(src)) continue;
        sdn::block_source(ctrl, src, now);
        out_.blocked_at.emplace_back(src, now);
      }
    }
    tick(EventKind::detector_tick, now + cfg_.detector.period_ms);
  }

  // -- blockchain ----------------------------------------------------------

  static chain::Millis millis(SimTime t) { return static_cast<chain::Millis>(std::floor(t)); }

  void submit(const Packet& p, SimTime now) {
    chain::ByteWriter w;
    w.u64(p.id);
    w.i64(p.size);
    w.i64(millis(p.created_at));
    auto tx = chain::make_transaction(sensor_name(p.src), "bs", w.take(), millis(now));
    const auto verdict = chain::verify_transaction(tx, contract_);
    ledger_->admit_or_park(tx, verdict, millis(now));
    if (verdict.is_valid()) ++out_.counters.txs_admitted_valid;
    else if (verdict.is_pending()) ++out_.counters.txs_parked;
    if (ledger_->queued().size() >= static_cast<std::size_t>(cfg_.chain.batch_size)) {
      mine(now, false);
    }
  }

  /// One block, or every queued transaction when `drain` is set.
  void mine(SimTime now, bool drain) {
    const auto batch = static_cast<std::size_t>(cfg_.chain.batch_size);
    do {
      auto block = ledger_->seal_next(millis(now), batch);
      const auto n = static_cast<std::int64_t>(block.txs.size());
      ledger_->append_block(block);
      chain::commit_to_storage(*ledger_, ledger_->blocks().back(), store_);
      ++out_.counters.blocks;
      out_.counters.gas_used += chain::gas_for(n, cfg_.calibration.gas);
    } while (drain && !ledger_->queued().empty());
  }

  void on_sweep(SimTime now) {
    if (!registered_late_ && cfg_.chain.register_after_ms >= 0.0 &&
        now >= cfg_.chain.register_after_ms) {
      for (std::int64_t id = 0; id < std::min<std::int64_t>(cfg_.chain.unregistered_sensors,
                                                            cfg_.node_count);
           ++id) {
        contract_.register_sensor(sensor_name(id));
      }
      registered_late_ = true;
    }
    const auto r = ledger_->expire_pending(millis(now), contract_,
                                           static_cast<chain::Millis>(cfg_.chain.pending_timeout_ms));
    out_.counters.txs_promoted += r.promoted.size();
    out_.counters.txs_discarded += r.discarded.size();
    if (ledger_->queued().size() >= static_cast<std::size_t>(cfg_.chain.batch_size)) {
      mine(now, false);
    }
    tick(EventKind::pending_sweep, now + cfg_.chain.sweep_period_ms);
  }

  // -- measurement ---------------------------------------------------------

  void on_measure(SimTime now, std::int32_t channel) {
    if (channel == 0) {
      const double secs = cfg_.measurement_period_ms / 1000.0;
      const double unblocked = static_cast<double>(tick_unblocked_attack_) / secs / 1000.0;
      const double blocked = static_cast<double>(tick_blocked_attack_) / secs / 1000.0;
      avail_mbps_ = cfg_.calibration.bandwidth_mbps(unblocked, blocked);
      bandwidth_samples_.push_back({now, avail_mbps_});
      tick_unblocked_attack_ = tick_blocked_attack_ = 0;
      tick(EventKind::measurement_tick, now + cfg_.measurement_period_ms, 0);
    } else {
      const double secs = cfg_.cpu_sample_ms / 1000.0;
      const double load = static_cast<double>(cpu_unblocked_attack_) / secs / 1000.0;
      out_.cpu.push_back({now / 1000.0, cfg_.calibration.cpu_idle_pct + cfg_.calibration.cpu_kappa * load});
      cpu_unblocked_attack_ = 0;
      tick(EventKind::measurement_tick, now + cfg_.cpu_sample_ms, 1);
    }
  }

  void finish() {
    auto& c = out_.counters;
    if (distb()) {
      if (!ledger_->queued().empty()) mine(out_.ended_at, true);
      c.committed_txs = ledger_->committed_tx_count();
      out_.chain_height = ledger_->blocks().size();
      out_.chain_valid = chain::validate_chain(*ledger_).valid;
      out_.blocks = ledger_->blocks();
    }
    c.in_flight = queue_.packets_queued() + uplink_.size();

    const double n = static_cast<double>(cfg_.node_count);
    const double kbps = out_.ended_at > 0.0
                            ? static_cast<double>(c.benign_delivered_bytes) * 8.0 / out_.ended_at
                            : 0.0;
    out_.throughput.push_back({n, kbps});

    double x = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& s : bandwidth_samples_) {
      if (cfg_.attack && (s.x - cfg_.measurement_period_ms < cfg_.attack->start_ms ||
                          s.x > cfg_.attack->stop_ms)) {
        continue;
      }
      sum += cfg_.calibration.bandwidth_base_mbps - s.y;  // deficits sum exactly to 0 when idle
      ++count;
    }
    if (cfg_.attack) {
      x = cfg_.attack->sources * cfg_.attack->multiplier * cfg_.sensor_rate_pps / 1000.0;
    }
    if (count > 0) {
      out_.bandwidth.push_back(
          {x, cfg_.calibration.bandwidth_base_mbps - sum / static_cast<double>(count)});
    }

    for (double s : cfg_.file_sizes_mb) {
      out_.response.push_back({s, cfg_.calibration.response_ms(distb(), s)});
    }
    if (distb()) out_.gas = measure_gas(cfg_.calibration.gas, cfg_.gas_tx_counts);
  }

  const ScenarioConfig& cfg_;
  EventQueue queue_;
  Rng traffic_rng_;
  Rng attack_rng_;
  double threshold_;
  double avail_mbps_;
  topology::NodeSet nodes_;
  clustering::ClusterSet clusters_;
  std::int64_t round_ = 0;
  std::int64_t live_ = 0;
  double capacity_kbps_ = 0.0;
  std::vector<sdn::ControllerState> controllers_;
  std::uint64_t next_packet_id_ = 0;

  std::deque<Packet> uplink_;
  std::int64_t uplink_bytes_ = 0;
  bool busy_ = false;

  std::uint64_t tick_unblocked_attack_ = 0;
  std::uint64_t tick_blocked_attack_ = 0;
  std::uint64_t cpu_unblocked_attack_ = 0;
  std::vector<Series2> bandwidth_samples_;

  std::optional<chain::Ledger> ledger_;
  chain::ContractState contract_;
  chain::MemoryBlockStore store_;
  bool registered_late_ = false;

  MetricsBundle out_;
};

nlohmann::json series_json(const std::vector<Series2>& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : s) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

MetricsBundle run_scenario(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

nlohmann::json to_json(const MetricsBundle& m) {
  const auto& c = m.counters;
  nlohmann::json blocked = nlohmann::json::array();
  for (const auto& [src, at] : m.blocked_at) blocked.push_back({src, at});
  return {{"mode", to_string(m.mode)},
          {"throughput", series_json(m.throughput)},
          {"bandwidth", series_json(m.bandwidth)},
          {"response", series_json(m.response)},
          {"gas", series_json(m.gas)},
          {"cpu", series_json(m.cpu)},
          {"counters",
           {{"generated", c.generated},
            {"delivered", c.delivered},
            {"dropped", c.dropped},
            {"in_flight", c.in_flight},
            {"blocked", c.blocked},
            {"benign_generated", c.benign_generated},
            {"benign_delivered", c.benign_delivered},
            {"benign_delivered_bytes", c.benign_delivered_bytes},
            {"attack_generated", c.attack_generated},
            {"attack_delivered", c.attack_delivered},
            {"attack_blocked", c.attack_blocked},
            {"txs_admitted_valid", c.txs_admitted_valid},
            {"txs_parked", c.txs_parked},
            {"txs_promoted", c.txs_promoted},
            {"txs_discarded", c.txs_discarded},
            {"committed_txs", c.committed_txs},
            {"blocks", c.blocks},
            {"gas_used", c.gas_used},
            {"rounds", c.rounds},
            {"events", c.events}}},
          {"terminated_early", m.terminated_early},
          {"ended_at_ms", m.ended_at},
          {"chain_valid", m.chain_valid},
          {"chain_height", m.chain_height},
          {"blocked_sources", blocked}};
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= n) return;
            i = next++;
          }
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ScenarioConfig throughput_scenario(const ScenarioConfig& base, std::int64_t nodes, Mode mode) {
  ScenarioConfig cfg = base;
  cfg.mode = mode;
  cfg.node_count = nodes;
  cfg.attack.reset();
  return cfg;
}

ScenarioConfig bandwidth_scenario(const ScenarioConfig& base, double rate_kps, Mode mode) {
  ScenarioConfig cfg = base;
  cfg.mode = mode;
  AttackConfig a;
  a.start_ms = 1000.0;
  a.stop_ms = 21000.0;
  a.sources = 4;
  a.multiplier = rate_kps * 1000.0 / (a.sources * cfg.sensor_rate_pps);
  cfg.attack = a;
  cfg.sim_time_ms = 22000.0;
  return cfg;
}

ScenarioConfig cpu_scenario(const ScenarioConfig& base) {
  ScenarioConfig cfg = base;
  cfg.mode = Mode::distb;
  AttackConfig a;
  a.start_ms = 400.0;
  a.stop_ms = 3600.0;
  a.sources = 12;
  a.multiplier = 6.0;
  a.ramp_min_ms = 1400.0;
  a.ramp_max_ms = 3200.0;
  cfg.attack = a;
  cfg.sim_time_ms = 3600.0;
  return cfg;
}

std::vector<Row> measure_throughput(const ScenarioConfig& base,
                                    const std::vector<std::int64_t>& node_counts,
                                    unsigned threads) {
  if (node_counts.empty()) throw Error(ErrorCode::invalid_argument, "measure_throughput: no node counts");
  std::vector<Row> rows(node_counts.size());
  parallel_for(node_counts.size() * 2, threads, [&](std::size_t i) {
    const auto k = i / 2;
    const Mode mode = i % 2 == 0 ? Mode::distb : Mode::baseline;
    const auto m = run_scenario(throughput_scenario(base, node_counts[k], mode));
    const double v = m.throughput.front().y;
    rows[k].x = static_cast<double>(node_counts[k]);
    (mode == Mode::distb ? rows[k].distb : rows[k].baseline) = v;
  });
  return rows;
}

std::vector<Row> measure_bandwidth_under_attack(const ScenarioConfig& base,
                                                const std::vector<double>& rates_kps,
                                                unsigned threads) {
  if (rates_kps.empty()) throw Error(ErrorCode::invalid_argument, "measure_bandwidth: no rates");
  std::vector<Row> rows(rates_kps.size());
  parallel_for(rates_kps.size() * 2, threads, [&](std::size_t i) {
    const auto k = i / 2;
    const Mode mode = i % 2 == 0 ? Mode::distb : Mode::baseline;
    const auto m = run_scenario(bandwidth_scenario(base, rates_kps[k], mode));
    rows[k].x = rates_kps[k];
    (mode == Mode::distb ? rows[k].distb : rows[k].baseline) = m.bandwidth.front().y;
  });
  return rows;
}

std::vector<Row> measure_response_time(const calib::Calibration& calibration,
                                       const std::vector<double>& sizes_mb) {
  std::vector<Row> rows;
  for (double s : sizes_mb) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::config, "file size must be > 0 Mb");
    }
    rows.push_back({s, calibration.response_ms(true, s), calibration.response_ms(false, s)});
  }
  return rows;
}

std::vector<Series2> measure_gas(const chain::GasModel& model,
                                 const std::vector<std::int64_t>& tx_counts) {
  std::vector<Series2> out;
  for (auto n : tx_counts) {
    out.push_back({static_cast<double>(n), static_cast<double>(chain::gas_for(n, model))});
  }
  return out;
}

std::vector<Series2> measure_cpu_flooding(const ScenarioConfig& base) {
  return run_scenario(cpu_scenario(base)).cpu;
}

double fit_cpu_kappa(const ScenarioConfig& base, double target_peak_pct) {
  ScenarioConfig cfg = base;
  cfg.calibration.cpu_kappa = 1.0;
  double peak_load = 0.0;
  for (const auto& s : measure_cpu_flooding(cfg)) {
    peak_load = std::max(peak_load, s.y - cfg.calibration.cpu_idle_pct);
  }
  if (peak_load <= 0.0) throw Error(ErrorCode::invalid_argument, "flooding scenario produced no load");
  return (target_peak_pct - cfg.calibration.cpu_idle_pct) / peak_load;
}

}  // namespace distb::sim
