// SPDX-License-Identifier: Apache-2.0
//
// macrodiv: closed-form SINR analysis for dual-user macrodiversity MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Experimental configurations: exponential power profiles, the ten reference
// scenarios, and random two-user drops with path loss and lognormal shadowing.

#include "macrodiv/core_types.hpp"
#include "macrodiv/errors.hpp"
#include "macrodiv/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace macrodiv {

/// P_i = K alpha^{i-1}, K = total / sum_{j<n} alpha^j.
inline std::vector<double> exponential_profile(double total, double alpha, std::size_t n_rx) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("exponential_profile: alpha must be > 0");
  if (!(total > 0.0)) throw DomainError("exponential_profile: total must be > 0");
  if (n_rx < 2) throw ArgumentError("exponential_profile: n_R must be >= 2");
  std::vector<double> w(n_rx);
  double s = 0.0, a = 1.0;
  for (std::size_t i = 0; i < n_rx; ++i, a *= alpha) {
    w[i] = a;
    s += a;
  }
  for (auto& x : w) x *= total / s;
  return w;
}

struct ScenarioSpec {
  double alpha_desired = 0.2;
  double alpha_interferer = 0.2;
  double rho_db = 5.0;
  double varsigma = 1.0;  // Tr(P1)/Tr(P2)
  std::size_t n_rx = 3;
  double total_p1 = 3.0;

  void validate() const {
    if (!(alpha_desired > 0.0) || !(alpha_interferer > 0.0)) throw DomainError("scenario: alphas must be > 0");
    if (!(varsigma > 0.0)) throw DomainError("scenario: varsigma must be > 0");
    if (!(total_p1 > 0.0)) throw DomainError("scenario: total_p1 must be > 0");
    if (!std::isfinite(rho_db)) throw DomainError("scenario: rho_db must be finite");
    if (n_rx < 2) throw ArgumentError("scenario: n_R must be >= 2");
  }
};

struct Scenario {
  PowerProfile profile;
  double sigma2;
};

/// rho = Tr(P1)/(n_R s2), varsigma = Tr(P1)/Tr(P2).
inline Scenario build_scenario(const ScenarioSpec& s) {
  s.validate();
  auto p1 = exponential_profile(s.total_p1, s.alpha_desired, s.n_rx);
  auto p2 = exponential_profile(s.total_p1 / s.varsigma, s.alpha_interferer, s.n_rx);
  const double sigma2 = s.total_p1 / (static_cast<double>(s.n_rx) * db_to_linear(s.rho_db));
  return {PowerProfile(std::move(p1), std::move(p2)), sigma2};
}

inline constexpr std::array<std::string_view, 10> kTableIds = {"S1", "S2", "S3", "S4", "S5",
                                                               "S6", "S7", "S8", "S9", "S10"};

/// Reference scenario S1..S10; rho defaults to 5 dB.
inline ScenarioSpec table1_scenario(std::string_view id, double rho_db = 5.0) {
  struct Row {
    double a1, a2, vs;
  };
  static constexpr std::array<Row, 10> rows = {{{0.2, 0.2, 1},
                                               {0.2, 1, 1},
                                               {0.2, 5, 1},
                                               {1, 1, 1},
                                               {1, 0.2, 1},
                                               {0.2, 0.2, 20},
                                               {0.2, 1, 20},
                                               {0.2, 5, 20},
                                               {1, 1, 20},
                                               {1, 0.2, 20}}};
  for (std::size_t j = 0; j < kTableIds.size(); ++j) {
    if (kTableIds[j] == id) {
      ScenarioSpec s;
      s.alpha_desired = rows[j].a1;
      s.alpha_interferer = rows[j].a2;
      s.varsigma = rows[j].vs;
      s.rho_db = rho_db;
      return s;
    }
  }
  throw ArgumentError("unknown scenario id '" + std::string(id) + "' (expected S1..S10)");
}

// ---- random drops ------------------------------------------------------------

struct Point {
  double x, y;
};

struct DropSpec {
  std::uint64_t seed = 1;
  double path_loss_exponent = 3.5;
  double shadow_sigma_db = 8.0;
  /// Receive sites; the coverage area is their triangle.
  std::array<Point, 3> bs = {{{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.86602540378443864676}}};
  double min_distance = 0.01;

  // Coverage rule for the common transmit constant.
  double calibration_sigma2 = 1.0;
  double coverage_snr_db = 3.0;
  double coverage_fraction = 0.95;
  std::size_t calibration_probes = 10000;
  std::uint64_t calibration_seed = 0x5eedca11b4a7e5ull;

  void validate() const {
    if (!(path_loss_exponent > 2.0)) throw DomainError("drop: path loss exponent must be > 2");
    if (!(shadow_sigma_db >= 0.0)) throw DomainError("drop: shadow sigma must be >= 0");
    if (!(min_distance > 0.0)) throw DomainError("drop: min_distance must be > 0");
    if (!(coverage_fraction > 0.0 && coverage_fraction < 1.0)) throw DomainError("drop: coverage fraction in (0,1)");
    if (calibration_probes < 100) throw ArgumentError("drop: need at least 100 calibration probes");
    const double area = (bs[1].x - bs[0].x) * (bs[2].y - bs[0].y) - (bs[2].x - bs[0].x) * (bs[1].y - bs[0].y);
    if (!(std::abs(area) > 0.0)) throw DomainError("drop: base stations are collinear");
  }
};

namespace detail {
// Uniform point in the triangle from two uniforms (fold the unit square).
inline Point triangle_point(const std::array<Point, 3>& t, double u, double v) {
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return {t[0].x + u * (t[1].x - t[0].x) + v * (t[2].x - t[0].x),
          t[0].y + u * (t[1].y - t[0].y) + v * (t[2].y - t[0].y)};
}

struct Link {
  Point where;
  std::array<double, 3> gain;  // d^{-gamma} 10^{X/10} to each site, before scaling
};

// One located transmitter: stream slot 0 gives the position, slots 1..3 the
// shadowing of the three links.
inline Link draw_link(const DropSpec& s, const Philox4x32& gen, const GaussianStream& gauss, std::uint64_t idx) {
  const auto b = gen({static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32), 0u, 0xD509u});
  const double u = uniform_open((std::uint64_t{b[0]} << 32) | b[1]);
  const double v = uniform_open((std::uint64_t{b[2]} << 32) | b[3]);
  Link l{triangle_point(s.bs, u, v), {}};
  for (std::size_t k = 0; k < 3; ++k) {
    const double d = std::max(s.min_distance, std::hypot(l.where.x - s.bs[k].x, l.where.y - s.bs[k].y));
    const double x_db = s.shadow_sigma_db * std::sqrt(2.0) * gauss.normal(idx, static_cast<std::uint32_t>(1 + k)).real();
    l.gain[k] = std::pow(d, -s.path_loss_exponent) * std::pow(10.0, x_db / 10.0);
  }
  return l;
}
}  // namespace detail

struct DropCalibration {
  double transmit_scale;     // common constant c
  double achieved_coverage;  // fraction of probes meeting the SNR target with c
};

/// Common transmit constant c such that the best-site SNR c*gain/s2 reaches
/// the target on at least the requested fraction of probe locations. The
/// threshold probe is a lower 99% binomial order statistic, so fresh probes
/// also meet the fraction. Depends on the geometry, not on the drop seed.
inline DropCalibration calibrate_drop(const DropSpec& s) {
  s.validate();
  const Philox4x32 gen(s.calibration_seed);
  const GaussianStream gauss(s.calibration_seed ^ 0x9e3779b97f4a7c15ull);
  const std::size_t N = s.calibration_probes;
  std::vector<double> best(N);
  for (std::size_t j = 0; j < N; ++j) {
    const auto l = detail::draw_link(s, gen, gauss, j);
    best[j] = *std::max_element(l.gain.begin(), l.gain.end());
  }
  std::sort(best.begin(), best.end());
  const double miss = 1.0 - s.coverage_fraction;
  const double nf = static_cast<double>(N);
  const double k = std::floor(nf * miss - 2.326 * std::sqrt(nf * miss * s.coverage_fraction));
  const std::size_t idx = static_cast<std::size_t>(std::max(0.0, k));
  const double c = db_to_linear(s.coverage_snr_db) * s.calibration_sigma2 / best[idx];
  std::size_t ok = 0;
  for (double g : best) ok += (c * g / s.calibration_sigma2 >= db_to_linear(s.coverage_snr_db) * (1.0 - 1e-12));
  return {c, static_cast<double>(ok) / nf};
}

/// Two users uniform over the triangle; P_{ik} = c d_{ik}^{-gamma} 10^{X_{ik}/10}.
/// Column k = 1 is the desired user, k = 2 the interferer.
inline PowerProfile random_drop(const DropSpec& s, std::optional<DropCalibration> cal = std::nullopt) {
  s.validate();
  const double c = (cal ? *cal : calibrate_drop(s)).transmit_scale;
  const Philox4x32 gen(s.seed);
  const GaussianStream gauss(s.seed ^ 0x9e3779b97f4a7c15ull);
  const auto u1 = detail::draw_link(s, gen, gauss, 0);
  const auto u2 = detail::draw_link(s, gen, gauss, 1);
  std::vector<double> p1(3), p2(3);
  for (std::size_t i = 0; i < 3; ++i) {
    p1[i] = c * u1.gain[i];
    p2[i] = c * u2.gain[i];
  }
  return PowerProfile(std::move(p1), std::move(p2));
}

}  // namespace macrodiv
