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

#include "macrodiv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace macrodiv {

enum class Receiver { mmse, zf };

inline std::string_view to_string(Receiver r) { return r == Receiver::mmse ? "mmse" : "zf"; }

inline Receiver parse_receiver(std::string_view s) {
  if (s == "mmse" || s == "MMSE") return Receiver::mmse;
  if (s == "zf" || s == "ZF") return Receiver::zf;
  throw ArgumentError("unknown receiver '" + std::string(s) + "' (expected mmse or zf)");
}

/// Per-link average powers of the two users, linear scale.
///
/// `p1()[i]` is E|H_{i1}|^2 (desired user at receive antenna i), `p2()[i]`
/// the interferer. Every entry is strictly positive and there are at least two
/// receive antennas. Profiles are immutable; perturbed copies record the jitter
/// that produced them.
class PowerProfile {
public:
  PowerProfile(std::vector<double> p1, std::vector<double> p2,
               std::vector<double> jitter_history = {})
      : p1_(std::move(p1)), p2_(std::move(p2)), jitter_(std::move(jitter_history)) {
    if (p1_.size() != p2_.size())
      throw ArgumentError("power profile: p1 and p2 must have the same length");
    if (p1_.size() < 2) throw ArgumentError("power profile: at least two receive antennas required");
    for (std::size_t i = 0; i < p1_.size(); ++i) {
      if (!(p1_[i] > 0.0) || !(p2_[i] > 0.0) || !std::isfinite(p1_[i]) || !std::isfinite(p2_[i]))
        throw ArgumentError("power profile: all link powers must be finite and > 0");
    }
  }

  std::size_t n_rx() const noexcept { return p1_.size(); }
  std::span<const double> p1() const noexcept { return p1_; }
  std::span<const double> p2() const noexcept { return p2_; }
  double p1(std::size_t i) const { return p1_.at(i); }
  double p2(std::size_t i) const { return p2_.at(i); }

  double trace_p1() const { return sum(p1_); }
  double trace_p2() const { return sum(p2_); }

  /// Deltas of every jitter applied to produce this profile, oldest first.
  std::span<const double> jitter_history() const noexcept { return jitter_; }
  bool jittered() const noexcept { return !jitter_.empty(); }

  /// Same profile with antenna indices reordered: result[i] = this[perm[i]].
  PowerProfile permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_rx()) throw ArgumentError("permutation size mismatch");
    std::vector<double> a(n_rx()), b(n_rx());
    for (std::size_t i = 0; i < n_rx(); ++i) {
      a[i] = p1_.at(perm[i]);
      b[i] = p2_.at(perm[i]);
    }
    return PowerProfile(std::move(a), std::move(b), jitter_);
  }

  friend bool operator==(const PowerProfile&, const PowerProfile&) = default;

private:
  static double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }

  std::vector<double> p1_;
  std::vector<double> p2_;
  std::vector<double> jitter_;
};

struct SystemConfig {
  double sigma2 = 1.0;
  Receiver receiver = Receiver::mmse;
  int modulation_order = 4;

  void validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
      throw ArgumentError("sigma2 must be finite and > 0");
    if (modulation_order < 2) throw InvalidModulation("modulation order M must be >= 2");
  }
};

/// MPSK constants of the MGF-based SER integral.
struct Modulation {
  int order = 4;
  double g = 0.5;                                 // sin^2(pi/M)
  double t_max = 3.0 * std::numbers::pi / 4.0;    // (M-1)pi/M
};

inline Modulation mpsk_params(int M) {
  if (M < 2) throw InvalidModulation("MPSK order must be >= 2, got " + std::to_string(M));
  const double s = std::sin(std::numbers::pi / M);
  // sin(pi/2) is exactly 1 in double, so BPSK gets g == 1 exactly.
  return Modulation{M, s * s, (M - 1) * std::numbers::pi / M};
}

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Sampled CDF, z strictly increasing.
struct DistributionCurve {
  std::vector<std::pair<double, double>> points;

  bool well_formed(double tol = 1e-9) const {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (!(points[i].first > points[i - 1].first)) return false;
      if (points[i].second < points[i - 1].second - tol) return false;
    }
    for (const auto& [z, f] : points) {
      if (z < 0.0 || f < -tol || f > 1.0 + tol) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Degeneracy screening
// ---------------------------------------------------------------------------

enum class DegeneracyKind {
  desired_power,      // P_{i1} ~ P_{k1}        (n~_ik ~ 0)
  cross_product,      // P_{i1}P_{k2} ~ P_{k1}P_{i2}  (m~_ik ~ 0)
  interferer_power,   // P_{i2} ~ P_{k2}        (bc - ad ~ 0 in the integral families)
  eta_denominator,    // n~_il m~_ik ~ n~_ik m~_il
};

inline std::string_view to_string(DegeneracyKind k) {
  switch (k) {
    case DegeneracyKind::desired_power: return "desired_power";
    case DegeneracyKind::cross_product: return "cross_product";
    case DegeneracyKind::interferer_power: return "interferer_power";
    case DegeneracyKind::eta_denominator: return "eta_denominator";
  }
  return "unknown";
}

struct DegeneratePair {
  DegeneracyKind kind;
  std::size_t i;       // zero-based antenna indices, i < k
  std::size_t k;
  std::size_t anchor;  // for eta_denominator: the fixed index; otherwise == i
  double relative_gap;

  friend bool operator==(const DegeneratePair&, const DegeneratePair&) = default;
};

struct DegeneracyReport {
  double eps_rel = 1e-6;
  std::vector<DegeneratePair> pairs;

  bool degenerate() const noexcept { return !pairs.empty(); }

  std::string describe() const {
    if (pairs.empty()) return "no degeneracy";
    std::ostringstream os;
    const auto& p = pairs.front();
    os << "degenerate antenna pair (" << p.i + 1 << "," << p.k + 1 << ") via " << to_string(p.kind)
       << " (relative gap " << p.relative_gap << " < " << eps_rel << ")";
    if (pairs.size() > 1) os << " and " << pairs.size() - 1 << " more";
    return os.str();
  }
};

inline constexpr double kDefaultDegeneracyEps = 1e-6;

namespace detail {
inline double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}
}  // namespace detail

/// Flags every quantity that the closed-form CDF divides by and that falls
/// below `eps_rel` relative to the magnitude of its operands.
inline DegeneracyReport validate_profile(const PowerProfile& p, double eps_rel = kDefaultDegeneracyEps) {
  DegeneracyReport rep;
  rep.eps_rel = eps_rel;
  const std::size_t n = p.n_rx();
  const auto P1 = p.p1();
  const auto P2 = p.p2();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (double g = detail::relative_gap(P1[i], P1[k]); g < eps_rel)
        rep.pairs.push_back({DegeneracyKind::desired_power, i, k, i, g});
      if (double g = detail::relative_gap(P1[i] * P2[k], P1[k] * P2[i]); g < eps_rel)
        rep.pairs.push_back({DegeneracyKind::cross_product, i, k, i, g});
      if (double g = detail::relative_gap(P2[i], P2[k]); g < eps_rel)
        rep.pairs.push_back({DegeneracyKind::interferer_power, i, k, i, g});
    }
  }
  // eta~_ik denominators: n~_il m~_ik - n~_ik m~_il for every anchor i and l != k.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l) {
        if (k == i || l == i) continue;
        const double nik = P1[i] - P1[k], nil = P1[i] - P1[l];
        const double mik = P1[i] * P2[k] - P1[k] * P2[i];
        const double mil = P1[i] * P2[l] - P1[l] * P2[i];
        if (double g = detail::relative_gap(nil * mik, nik * mil); g < eps_rel)
          rep.pairs.push_back({DegeneracyKind::eta_denominator, k, l, i, g});
      }
    }
  }
  return rep;
}

}  // namespace macrodiv
