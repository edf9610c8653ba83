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

// Coefficients of the exact high-SNR expansions: Upsilon_i, Phi_i, the ZF
// constant K~0 = E{h2'h2 / h2'P1^{-1}h2}/|P1| and the MMSE function K0(-s).

#include "macrodiv/core_types.hpp"
#include "macrodiv/special_fn.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace macrodiv {

namespace detail {
inline void require_index(const PowerProfile& p, std::size_t i) {
  if (i >= p.n_rx()) throw ArgumentError("antenna index out of range");
}

inline void require_nonzero(double x, double scale, double eps, const char* what, std::size_t i, std::size_t k) {
  if (!(std::abs(x) >= eps * scale))
    throw DegeneracyError(std::string(what) + ": antennas " + std::to_string(i + 1) + " and " +
                              std::to_string(k + 1) + " have equal power ratios",
                          i, k);
}
}  // namespace detail

/// Upsilon_i = P_{i2}^{n_R-2} / prod_{k != i} (P_{k1}P_{i2} - P_{i1}P_{k2}); i is zero-based.
inline double upsilon(const PowerProfile& p, std::size_t i, double eps_rel = kDefaultDegeneracyEps) {
  detail::require_index(p, i);
  const auto P1 = p.p1();
  const auto P2 = p.p2();
  const std::size_t n = p.n_rx();
  double den = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    const double x = P1[k] * P2[i], y = P1[i] * P2[k];
    detail::require_nonzero(x - y, std::max(x, y), eps_rel, "upsilon", i, k);
    den *= x - y;
  }
  return std::pow(P2[i], static_cast<double>(n) - 2.0) / den;
}

inline std::vector<double> upsilon_all(const PowerProfile& p, double eps_rel = kDefaultDegeneracyEps) {
  std::vector<double> u(p.n_rx());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = upsilon(p, i, eps_rel);
  return u;
}

/// Phi_i = sum_{k != i} (P_{i2} Ups_i P_{k1}P_{k2} + P_{k2} Ups_k P_{i1}P_{i2}) / (P_{k1}P_{i2} - P_{k2}P_{i1}).
/// No sign constraint.
inline double phi_i(const PowerProfile& p, std::size_t i, double eps_rel = kDefaultDegeneracyEps) {
  detail::require_index(p, i);
  const auto P1 = p.p1();
  const auto P2 = p.p2();
  const auto ups = upsilon_all(p, eps_rel);
  double s = 0.0;
  for (std::size_t k = 0; k < p.n_rx(); ++k) {
    if (k == i) continue;
    const double num = P2[i] * ups[i] * P1[k] * P2[k] + P2[k] * ups[k] * P1[i] * P2[i];
    s += num / (P1[k] * P2[i] - P2[k] * P1[i]);
  }
  return s;
}

/// K~0 = sum_i Ups_i P_{i2} + sum_{u<v} (Ups_u P_{v1} + Ups_v P_{u1}) (ln r_u - ln r_v)/(r_u - r_v),
/// r_i = P_{i1}/P_{i2}. The pair sum runs over unordered pairs.
inline double k0_tilde(const PowerProfile& p, double eps_rel = kDefaultDegeneracyEps) {
  const auto P1 = p.p1();
  const auto P2 = p.p2();
  const std::size_t n = p.n_rx();
  const auto ups = upsilon_all(p, eps_rel);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += ups[i] * P2[i];
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double ru = P1[u] / P2[u], rv = P1[v] / P2[v];
      detail::require_nonzero(ru - rv, std::max(ru, rv), eps_rel, "k0_tilde", u, v);
      const double log_slope = (std::log(ru) - std::log(rv)) / (ru - rv);
      s += (ups[u] * P1[v] + ups[v] * P1[u]) * log_slope;
    }
  }
  return s;
}

/// K0(-s) = sum_i { e^{s r_i} E1(s r_i) (Phi_i - s Ups_i P_{i1}) + Ups_i P_{i2} }, s > 0.
inline double k0_closed(const PowerProfile& p, double s, double eps_rel = kDefaultDegeneracyEps) {
  if (!(s > 0.0)) throw DomainError("k0_closed: s must be > 0");
  const auto P1 = p.p1();
  const auto P2 = p.p2();
  const auto ups = upsilon_all(p, eps_rel);
  double total = 0.0;
  for (std::size_t i = 0; i < p.n_rx(); ++i) {
    const double r = P1[i] / P2[i];
    total += exp_e1_scaled(s * r) * (phi_i(p, i, eps_rel) - s * ups[i] * P1[i]) + ups[i] * P2[i];
  }
  return total;
}

}  // namespace macrodiv
