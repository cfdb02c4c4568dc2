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

#include "distb/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "distb/error.hpp"

namespace distb::calib {

namespace detail {
extern const char* const kEmbeddedTables;
}

const std::string& embedded_tables_text() {
  static const std::string text(detail::kEmbeddedTables);
  return text;
}

const nlohmann::json& embedded_tables() {
  static const nlohmann::json tables = nlohmann::json::parse(embedded_tables_text());
  return tables;
}

namespace {

std::vector<Row3> rows3(const char* name) {
  std::vector<Row3> out;
  for (const auto& r : embedded_tables().at(name).at("rows")) {
    out.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()});
  }
  return out;
}

std::vector<Row2> rows2(const char* name) {
  std::vector<Row2> out;
  for (const auto& r : embedded_tables().at(name).at("rows")) {
    out.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  }
  return out;
}

Profile profile_from(const std::vector<Row3>& rows, bool distb_column) {
  std::vector<double> y;
  for (const auto& r : rows) y.push_back(distb_column ? r.a : r.b);
  const auto fitted = isotonic_fit(y);
  Profile p;
  for (std::size_t i = 0; i < rows.size(); ++i) p.knots.push_back({rows[i].x, fitted[i]});
  return p;
}

}  // namespace

std::vector<Row3> throughput_table() { return rows3("throughput"); }
std::vector<Row3> bandwidth_table() { return rows3("bandwidth"); }
std::vector<Row3> response_table() { return rows3("response"); }
std::vector<Row2> gas_table() { return rows2("gas"); }
std::vector<Row2> cpu_table() { return rows2("cpu"); }

double Profile::at(double x) const {
  if (knots.empty()) return 0.0;
  if (knots.size() == 1) return knots.front().y;
  auto seg = [&](std::size_t i) {
    const auto& p = knots[i];
    const auto& q = knots[i + 1];
    return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
  };
  if (x <= knots.front().x) return std::max(0.0, seg(0));
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (x <= knots[i + 1].x) return seg(i);
  }
  return seg(knots.size() - 2);
}

double Calibration::response_ms(bool distb, double size_mb) const {
  const double x = std::log2(2.0 * size_mb);
  return distb ? response_alpha_distb + response_beta_distb * x
               : response_alpha_core + response_beta_core * x;
}

double Calibration::bandwidth_mbps(double unblocked_kpps, double blocked_kpps) const {
  double share = 0.0;
  if (unblocked_kpps > 0.0) share = attack_share_coeff * std::pow(unblocked_kpps, attack_share_exponent);
  return std::max(0.0, bandwidth_base_mbps - share - drop_overhead * blocked_kpps);
}

const Calibration& default_calibration() {
  static const Calibration c = [] {
    Calibration d;
    const auto t = throughput_table();
    d.throughput_distb = profile_from(t, true);
    d.throughput_baseline = profile_from(t, false);
    d.bandwidth_base_mbps = 3.8;
    d.attack_share_coeff = 0.32615142890649235;
    d.attack_share_exponent = 0.6675;
    d.drop_overhead = 0.016073298429319365;
    d.response_alpha_distb = -336.0613824998449;
    d.response_beta_distb = 209.7391635911496;
    d.response_alpha_core = -302.8247366656703;
    d.response_beta_core = 223.31229792463043;
    d.gas = {14071.428571428572, 3337.3015873015875};
    d.cpu_idle_pct = 3.0;
    d.cpu_kappa = 28.402366863905335;
    return d;
  }();
  return c;
}

namespace {

nlohmann::json profile_json(const Profile& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& k : p.knots) arr.push_back({k.x, k.y});
  return arr;
}

Profile profile_parse(const nlohmann::json& j, const char* key) {
  Profile p;
  if (!j.is_array() || j.size() < 1) {
    throw Error(ErrorCode::config, std::string("calibration.") + key + ": expected [[n, kbps], ...]");
  }
  for (const auto& k : j) {
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
      throw Error(ErrorCode::config, std::string("calibration.") + key + ": knots are [n, kbps] pairs");
    }
    p.knots.push_back({k[0].get<double>(), k[1].get<double>()});
  }
  for (std::size_t i = 1; i < p.knots.size(); ++i) {
    if (!(p.knots[i].x > p.knots[i - 1].x) || p.knots[i].y < p.knots[i - 1].y) {
      throw Error(ErrorCode::config,
                  std::string("calibration.") + key + ": knots must increase in n and be nondecreasing");
    }
  }
  return p;
}

}  // namespace

nlohmann::json to_json(const Calibration& c) {
  return {{"throughput_distb", profile_json(c.throughput_distb)},
          {"throughput_baseline", profile_json(c.throughput_baseline)},
          {"bandwidth_base_mbps", c.bandwidth_base_mbps},
          {"attack_share_coeff", c.attack_share_coeff},
          {"attack_share_exponent", c.attack_share_exponent},
          {"drop_overhead", c.drop_overhead},
          {"response_alpha_distb", c.response_alpha_distb},
          {"response_beta_distb", c.response_beta_distb},
          {"response_alpha_core", c.response_alpha_core},
          {"response_beta_core", c.response_beta_core},
          {"gas_base", c.gas.base},
          {"gas_per_tx", c.gas.per_tx},
          {"cpu_idle_pct", c.cpu_idle_pct},
          {"cpu_kappa", c.cpu_kappa}};
}

Calibration calibration_from_json(const nlohmann::json& j, const Calibration& base) {
  if (!j.is_object()) throw Error(ErrorCode::config, "calibration must be a JSON object");
  Calibration c = base;
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() {
      if (!value.is_number()) {
        throw Error(ErrorCode::config, "calibration." + key + ": expected a number");
      }
      const double v = value.get<double>();
      if (!std::isfinite(v)) throw Error(ErrorCode::config, "calibration." + key + ": not finite");
      return v;
    };
    if (key == "throughput_distb") c.throughput_distb = profile_parse(value, "throughput_distb");
    else if (key == "throughput_baseline") c.throughput_baseline = profile_parse(value, "throughput_baseline");
    else if (key == "bandwidth_base_mbps") c.bandwidth_base_mbps = number();
    else if (key == "attack_share_coeff") c.attack_share_coeff = number();
    else if (key == "attack_share_exponent") c.attack_share_exponent = number();
    else if (key == "drop_overhead") c.drop_overhead = number();
    else if (key == "response_alpha_distb") c.response_alpha_distb = number();
    else if (key == "response_beta_distb") c.response_beta_distb = number();
    else if (key == "response_alpha_core") c.response_alpha_core = number();
    else if (key == "response_beta_core") c.response_beta_core = number();
    else if (key == "gas_base") c.gas.base = number();
    else if (key == "gas_per_tx") c.gas.per_tx = number();
    else if (key == "cpu_idle_pct") c.cpu_idle_pct = number();
    else if (key == "cpu_kappa") c.cpu_kappa = number();
    else throw Error(ErrorCode::config, "unknown key 'calibration." + key + "'");
  }
  return c;
}

LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "fit_line: need >= 2 paired samples");
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_line_weighted(x, y, std::vector<double>(x.size(), 1.0));
}

double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  return sxy / sxx;
}

std::vector<double> isotonic_fit(const std::vector<double>& y) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      auto& last = blocks.back();
      auto& prev = blocks[blocks.size() - 2];
      if (prev.sum / static_cast<double>(prev.count) <= last.sum / static_cast<double>(last.count)) break;
      prev.sum += last.sum;
      prev.count += last.count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
  return out;
}

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y, double lo,
                   double hi) {
  PowerFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<long>(std::llround((hi - lo) / 1e-4));
  for (long k = 0; k <= steps; ++k) {
    const double g = lo + static_cast<double>(k) * 1e-4;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = std::pow(x[i], g);
      sxy += p * y[i];
      sxx += p * p;
    }
    const double a = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = a * std::pow(x[i], g) - y[i];
      sse += r * r;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = {a, g};
    }
  }
  return best;
}

FitReport fit_from_tables() {
  FitReport rep;
  Calibration& c = rep.calibration;
  c = default_calibration();

  // throughput
  const auto tp = throughput_table();
  c.throughput_distb = profile_from(tp, true);
  c.throughput_baseline = profile_from(tp, false);
  {
    std::vector<double> n, a, b;
    for (const auto& r : tp) {
      n.push_back(r.x);
      a.push_back(r.a);
      b.push_back(r.b);
    }
    rep.throughput_line_distb = fit_line(n, a);
    rep.throughput_line_baseline = fit_line(n, b);
    for (const auto& r : tp) {
      rep.throughput_max_rel_error =
          std::max({rep.throughput_max_rel_error,
                    std::abs(c.throughput_distb.at(r.x) / r.a - 1.0),
                    std::abs(c.throughput_baseline.at(r.x) / r.b - 1.0)});
      const auto& ld = rep.throughput_line_distb;
      const auto& lb = rep.throughput_line_baseline;
      rep.throughput_line_max_rel_error =
          std::max({rep.throughput_line_max_rel_error,
                    std::abs((ld.intercept + ld.slope * r.x) / r.a - 1.0),
                    std::abs((lb.intercept + lb.slope * r.x) / r.b - 1.0)});
    }
  }

  // bandwidth: shared base from the first DistB row
  const auto bw = bandwidth_table();
  c.bandwidth_base_mbps = bw.front().a;
  {
    std::vector<double> r, deficit_base, deficit_distb;
    for (const auto& row : bw) {
      r.push_back(row.x);
      deficit_base.push_back(c.bandwidth_base_mbps - row.b);
      deficit_distb.push_back(c.bandwidth_base_mbps - row.a);
    }
    const auto pf = fit_power(r, deficit_base);
    c.attack_share_coeff = pf.coeff;
    c.attack_share_exponent = pf.exponent;
    c.drop_overhead = fit_through_origin(r, deficit_distb);
    for (const auto& row : bw) {
      rep.bandwidth_max_abs_error_baseline =
          std::max(rep.bandwidth_max_abs_error_baseline,
                   std::abs(c.bandwidth_mbps(row.x, 0.0) - row.b));
      rep.bandwidth_max_abs_error_distb = std::max(
          rep.bandwidth_max_abs_error_distb, std::abs(c.bandwidth_mbps(0.0, row.x) - row.a));
    }
  }

  // response: relative least squares on log2(2 * size)
  const auto rt = response_table();
  {
    std::vector<double> x, d, k, wd, wk;
    for (const auto& row : rt) {
      x.push_back(std::log2(2.0 * row.x));
      d.push_back(row.a);
      k.push_back(row.b);
      wd.push_back(1.0 / (row.a * row.a));
      wk.push_back(1.0 / (row.b * row.b));
    }
    const auto fd = fit_line_weighted(x, d, wd);
    const auto fk = fit_line_weighted(x, k, wk);
    c.response_alpha_distb = fd.intercept;
    c.response_beta_distb = fd.slope;
    c.response_alpha_core = fk.intercept;
    c.response_beta_core = fk.slope;
    for (const auto& row : rt) {
      rep.response_max_rel_error_distb = std::max(
          rep.response_max_rel_error_distb, std::abs(c.response_ms(true, row.x) / row.a - 1.0));
      rep.response_max_rel_error_core = std::max(
          rep.response_max_rel_error_core, std::abs(c.response_ms(false, row.x) / row.b - 1.0));
    }
  }

  // gas
  const auto gt = gas_table();
  {
    std::vector<double> n, g;
    for (const auto& row : gt) {
      n.push_back(row.x);
      g.push_back(row.y);
    }
    const auto fit = fit_line(n, g);
    c.gas = {fit.intercept, fit.slope};
    for (const auto& row : gt) {
      rep.gas_max_rel_error =
          std::max(rep.gas_max_rel_error,
                   std::abs(static_cast<double>(chain::gas_for(static_cast<std::int64_t>(row.x), c.gas)) /
                                row.y -
                            1.0));
    }
  }

  // cpu: idle from the first sample; kappa is fitted by the simulator
  const auto ct = cpu_table();
  c.cpu_idle_pct = ct.front().y;
  for (const auto& row : ct) rep.cpu_peak_pct = std::max(rep.cpu_peak_pct, row.y);
  return rep;
}

nlohmann::json to_json(const FitReport& r) {
  return {{"calibration", to_json(r.calibration)},
          {"residuals",
           {{"throughput_max_rel_error", r.throughput_max_rel_error},
            {"throughput_line_max_rel_error", r.throughput_line_max_rel_error},
            {"throughput_line_distb", {{"intercept", r.throughput_line_distb.intercept},
                                       {"slope", r.throughput_line_distb.slope}}},
            {"throughput_line_baseline", {{"intercept", r.throughput_line_baseline.intercept},
                                          {"slope", r.throughput_line_baseline.slope}}},
            {"bandwidth_max_abs_error_distb", r.bandwidth_max_abs_error_distb},
            {"bandwidth_max_abs_error_baseline", r.bandwidth_max_abs_error_baseline},
            {"response_max_rel_error_distb", r.response_max_rel_error_distb},
            {"response_max_rel_error_core", r.response_max_rel_error_core},
            {"gas_max_rel_error", r.gas_max_rel_error},
            {"cpu_target_peak_pct", r.cpu_peak_pct}}}};
}

}  // namespace distb::calib
