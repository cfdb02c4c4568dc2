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

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "distb/blockchain.hpp"

namespace distb::calib {

/// Reference tables shipped with the build (data/reference_tables.json).
const std::string& embedded_tables_text();
const nlohmann::json& embedded_tables();

struct Row2 {
  double x;
  double y;
  friend bool operator==(const Row2&, const Row2&) = default;
};
struct Row3 {
  double x;
  double a;  // DistB column
  double b;  // baseline / core column
};

std::vector<Row3> throughput_table();
std::vector<Row3> bandwidth_table();
std::vector<Row3> response_table();
std::vector<Row2> gas_table();
std::vector<Row2> cpu_table();

/// Monotone piecewise-linear curve; linear extrapolation past either end.
struct Profile {
  std::vector<Row2> knots;

  double at(double x) const;
  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Every tunable constant of the evaluation models.
struct Calibration {
  // Sensor goodput capacity (kbps) as a function of live node count.
  Profile throughput_distb;
  Profile throughput_baseline;

  // Benign bandwidth: base - share_coeff * unblocked^share_exponent
  //                        - drop_overhead * blocked   (attack rates in kpps)
  double bandwidth_base_mbps = 3.8;
  double attack_share_coeff = 0.0;
  double attack_share_exponent = 1.0;
  double drop_overhead = 0.0;

  // response_ms = alpha + beta * log2(2 * size_mb)
  double response_alpha_distb = 0.0;
  double response_beta_distb = 0.0;
  double response_alpha_core = 0.0;
  double response_beta_core = 0.0;

  chain::GasModel gas;

  // cpu_pct = idle + kappa * unblocked attack kpps
  double cpu_idle_pct = 3.0;
  double cpu_kappa = 0.0;

  double response_ms(bool distb, double size_mb) const;
  double bandwidth_mbps(double unblocked_kpps, double blocked_kpps) const;
};

/// Frozen defaults, equal to what fit_from_tables() produces.
const Calibration& default_calibration();

nlohmann::json to_json(const Calibration& c);
/// Missing keys keep the values of `base`; unknown keys throw config errors.
Calibration calibration_from_json(const nlohmann::json& j,
                                  const Calibration& base = default_calibration());

// ---------------------------------------------------------------------------
// Fitting primitives
// ---------------------------------------------------------------------------

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Weighted least squares with weights w_i (minimises sum w_i * r_i^2).
LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w);
/// Least squares through the origin: y = slope * x.
double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);
/// Pool-adjacent-violators isotonic (nondecreasing) regression.
std::vector<double> isotonic_fit(const std::vector<double>& y);

struct PowerFit {
  double coeff = 0.0;
  double exponent = 1.0;
};
/// Minimises sum (coeff * x^exponent - y)^2 by scanning the exponent on a
/// 1e-4 grid over [lo, hi] with the coefficient in closed form.
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y, double lo = 0.1,
                   double hi = 1.5);

struct FitReport {
  Calibration calibration;
  LineFit throughput_line_distb;
  LineFit throughput_line_baseline;
  // max relative (throughput, response, gas) or absolute (bandwidth) residual
  double throughput_max_rel_error = 0.0;
  double throughput_line_max_rel_error = 0.0;
  double bandwidth_max_abs_error_distb = 0.0;
  double bandwidth_max_abs_error_baseline = 0.0;
  double response_max_rel_error_distb = 0.0;
  double response_max_rel_error_core = 0.0;
  double gas_max_rel_error = 0.0;
  double cpu_peak_pct = 0.0;
};

/// Fits every model except cpu_kappa from the embedded tables. The CPU
/// coefficient needs a simulated flood; see sim::fit_cpu_kappa.
FitReport fit_from_tables();

nlohmann::json to_json(const FitReport& r);

}  // namespace distb::calib
