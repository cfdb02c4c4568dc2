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

#include <doctest.h>

#include <cmath>

#include "distb/calibration.hpp"
#include "distb/error.hpp"

using namespace distb;
using namespace distb::calib;

TEST_SUITE("calibration") {
  TEST_CASE("embedded tables have the expected shape") {
    CHECK(throughput_table().size() == 13);
    CHECK(bandwidth_table().size() == 11);
    CHECK(response_table().size() == 10);
    CHECK(gas_table().size() == 8);
    CHECK(cpu_table().size() == 16);
    CHECK(throughput_table().back().x == 60);
    CHECK(bandwidth_table().back().x == 32);
  }

  TEST_CASE("line fits recover exact lines") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    const auto f = fit_line(x, y);
    CHECK(f.intercept == doctest::Approx(1));
    CHECK(f.slope == doctest::Approx(2));
    CHECK(fit_through_origin(x, {2, 4, 6, 8}) == doctest::Approx(2));
    const auto w = fit_line_weighted(x, y, {1, 10, 0.5, 3});
    CHECK(w.slope == doctest::Approx(2));
  }

  TEST_CASE("isotonic fit pools violators") {
    CHECK(isotonic_fit({1, 3, 2, 4}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(isotonic_fit({5, 4, 3}) == std::vector<double>{4, 4, 4});
    const std::vector<double> up{1, 2, 2, 7};
    CHECK(isotonic_fit(up) == up);
  }

  TEST_CASE("power fit recovers a known curve") {
    std::vector<double> x, y;
    for (double v : {1.0, 2.0, 5.0, 10.0, 30.0}) {
      x.push_back(v);
      y.push_back(0.4 * std::pow(v, 0.7));
    }
    const auto p = fit_power(x, y);
    CHECK(p.exponent == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(p.coeff == doctest::Approx(0.4).epsilon(1e-3));
  }

  TEST_CASE("profile interpolates and extrapolates") {
    const Profile p{{{1, 2}, {5, 10}, {10, 20}}};
    CHECK(p.at(1) == 2);
    CHECK(p.at(3) == doctest::Approx(6));
    CHECK(p.at(12) == doctest::Approx(24));
    CHECK(p.at(-100) >= 0);
  }

  TEST_CASE("refit from the embedded tables reproduces the frozen defaults") {
    const auto r = fit_from_tables();
    const auto& d = default_calibration();
    const auto& c = r.calibration;
    CHECK(c.throughput_distb == d.throughput_distb);
    CHECK(c.throughput_baseline == d.throughput_baseline);
    CHECK(c.bandwidth_base_mbps == doctest::Approx(d.bandwidth_base_mbps));
    CHECK(c.attack_share_coeff == doctest::Approx(d.attack_share_coeff));
    CHECK(c.attack_share_exponent == doctest::Approx(d.attack_share_exponent));
    CHECK(c.drop_overhead == doctest::Approx(d.drop_overhead));
    CHECK(c.response_alpha_distb == doctest::Approx(d.response_alpha_distb));
    CHECK(c.response_beta_distb == doctest::Approx(d.response_beta_distb));
    CHECK(c.response_alpha_core == doctest::Approx(d.response_alpha_core));
    CHECK(c.response_beta_core == doctest::Approx(d.response_beta_core));
    CHECK(c.gas.base == doctest::Approx(d.gas.base));
    CHECK(c.gas.per_tx == doctest::Approx(d.gas.per_tx));
  }

  TEST_CASE("fit residuals stay inside the table tolerances") {
    const auto r = fit_from_tables();
    CHECK(r.throughput_max_rel_error <= 0.15);
    CHECK(r.bandwidth_max_abs_error_distb <= 0.3);
    CHECK(r.bandwidth_max_abs_error_baseline <= 0.3);
    CHECK(r.response_max_rel_error_distb <= 0.15);
    CHECK(r.response_max_rel_error_core <= 0.15);
    CHECK(r.gas_max_rel_error <= 0.10);
    CHECK(r.cpu_peak_pct == 27);
  }

  TEST_CASE("gas rows within 10 percent") {
    const auto& d = default_calibration();
    for (const auto& row : gas_table()) {
      const auto g = static_cast<double>(chain::gas_for(static_cast<std::int64_t>(row.x), d.gas));
      CHECK(std::abs(g - row.y) / row.y <= 0.10);
    }
  }

  TEST_CASE("response model: distb faster at every tabulated size") {
    const auto& d = default_calibration();
    for (const auto& row : response_table()) {
      CHECK(d.response_ms(true, row.x) < d.response_ms(false, row.x));
      CHECK(std::abs(d.response_ms(true, row.x) - row.a) / row.a <= 0.15);
      CHECK(std::abs(d.response_ms(false, row.x) - row.b) / row.b <= 0.15);
    }
  }

  TEST_CASE("bandwidth model never goes negative and is full when idle") {
    const auto& d = default_calibration();
    CHECK(d.bandwidth_mbps(0, 0) == 3.8);
    CHECK(d.bandwidth_mbps(1e9, 0) == 0);
    CHECK(d.bandwidth_mbps(1, 0) > d.bandwidth_mbps(2, 0));
  }

  TEST_CASE("JSON round trip and partial override") {
    const auto& d = default_calibration();
    const auto back = calibration_from_json(to_json(d));
    CHECK(to_json(back) == to_json(d));
    const auto partial = calibration_from_json({{"cpu_kappa", 1.5}});
    CHECK(partial.cpu_kappa == 1.5);
    CHECK(partial.gas.base == d.gas.base);
  }

  TEST_CASE("unknown calibration keys are config errors") {
    try {
      calibration_from_json({{"cpu_kapa", 1.0}});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::config);
      CHECK(std::string(e.what()).find("cpu_kapa") != std::string::npos);
    }
  }
}
