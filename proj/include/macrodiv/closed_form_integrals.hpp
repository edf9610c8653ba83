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

// Closed forms of the double integrals behind both CDFs, and of the
// trigonometric integrals in the high-SNR SER expressions.
//
// ZF family (a, b, c, d, x):
//   I~1 = int_0^x int_0^inf e^{-bt-dt th} / (a + c th)   dth dt
//   I~2 = int_0^x int_0^inf e^{-bt-dt th} / (a + c th)^2 dth dt
//   I~3 = int_0^x int_0^inf t th e^{-bt-dt th} / (a + c th) dth dt
// MMSE family: the same kernels with an extra e^{-th} factor.
//
// When a/c < 0 the th-integrand of a single term has a pole on the positive
// axis. Those poles cancel in the CDF sum, so each term is taken as its
// principal value, which is what the real continuation of E1 and ln|.| give.

#include "macrodiv/asymptotic_coefficients.hpp"
#include "macrodiv/core_types.hpp"
#include "macrodiv/special_fn.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace macrodiv {

template <class Real = double>
struct IntegralArgs {
  Real a;
  Real b;
  Real c;
  Real d;
  Real x;
};

namespace detail {

template <class Real>
Real one_minus_exp_neg(Real y) {
  return -math::expm1(-y);
}

template <class Real>
void check_family_args(const IntegralArgs<Real>& g, double eps_rel, const char* who) {
  if (!(g.b > 0) || !(g.d > 0)) throw DomainError(std::string(who) + ": b and d must be > 0");
  if (g.a == 0 || g.c == 0) throw DomainError(std::string(who) + ": a and c must be nonzero");
  if (!(g.x >= 0)) throw DomainError(std::string(who) + ": x must be >= 0");
  const Real bc = g.b * g.c, ad = g.a * g.d;
  const Real scale = std::max(math::abs(bc), math::abs(ad));
  if (!(math::abs(bc - ad) >= static_cast<Real>(eps_rel) * scale))
    throw DegeneracyError(std::string(who) + ": bc - ad vanishes (equal interferer powers)");
}

// Pieces shared by the three ZF closed forms.
template <class Real>
struct ZfPieces {
  Real D;         // bc - ad
  Real log_ratio; // ln|bc/(ad)|
  Real decay;     // e^{-bx} e^{adx/c} E1(adx/c)
  Real e1_bx;     // E1(bx)
  Real one_m;     // 1 - e^{-bx}
};

template <class Real>
ZfPieces<Real> zf_pieces(const IntegralArgs<Real>& g) {
  const auto [a, b, c, d, x] = g;
  ZfPieces<Real> p;
  p.D = b * c - a * d;
  p.log_ratio = math::log(math::abs((b * c) / (a * d)));
  p.decay = math::exp(-b * x) * exp_e1_scaled_pv(a * d * x / c);
  p.e1_bx = exp_e1(b * x);
  p.one_m = one_minus_exp_neg(b * x);
  return p;
}

template <class Real>
struct MmsePieces {
  Real D;        // bc - ad
  Real decay_w;  // e^{-bx} e^{w} E1(w), w = (1+dx)a/c
  Real ex_ac;    // e^{a/c} E1(a/c)
  Real e1_diff;  // e^{b/d} [E1(b/d) - E1(b/d + bx)]
  Real one_m;    // 1 - e^{-bx}
};

template <class Real>
MmsePieces<Real> mmse_pieces(const IntegralArgs<Real>& g) {
  const auto [a, b, c, d, x] = g;
  MmsePieces<Real> p;
  p.D = b * c - a * d;
  const Real w = (1 + d * x) * a / c;
  p.decay_w = math::exp(-b * x) * exp_e1_scaled_pv(w);
  p.ex_ac = exp_e1_scaled_pv(a / c);
  p.e1_diff = exp_e1_scaled(b / d) - math::exp(-b * x) * exp_e1_scaled(b / d + b * x);
  p.one_m = one_minus_exp_neg(b * x);
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ZF family
// ---------------------------------------------------------------------------

template <class Real = double>
Real i1_tilde(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i1_tilde");
  if (g.x == 0) return 0;
  const auto p = detail::zf_pieces(g);
  return (p.log_ratio - p.decay + p.e1_bx) / p.D;
}

template <class Real = double>
Real i2_tilde(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i2_tilde");
  if (g.x == 0) return 0;
  const auto [a, b, c, d, x] = g;
  const auto p = detail::zf_pieces(g);
  const Real D2 = p.D * p.D;
  return (d * x / (c * p.D) + d / D2) * p.decay - d / D2 * p.e1_bx - d / D2 * p.log_ratio +
         p.one_m / (a * p.D);
}

template <class Real = double>
Real i3_tilde(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i3_tilde");
  if (g.x == 0) return 0;
  const auto [a, b, c, d, x] = g;
  const auto p = detail::zf_pieces(g);
  const Real D2 = p.D * p.D;
  return (a * x / (c * p.D) + a / D2) * p.decay - a / D2 * p.e1_bx - a / D2 * p.log_ratio +
         a * p.one_m / (b * c * p.D) + p.one_m / (b * c * d);
}

// ---------------------------------------------------------------------------
// MMSE family
// ---------------------------------------------------------------------------

template <class Real = double>
Real i1_mmse(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i1_mmse");
  if (g.x == 0) return 0;
  const auto p = detail::mmse_pieces(g);
  return (p.ex_ac - p.e1_diff - p.decay_w) / p.D;
}

template <class Real = double>
Real i2_mmse(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i2_mmse");
  if (g.x == 0) return 0;
  const auto [a, b, c, d, x] = g;
  const auto p = detail::mmse_pieces(g);
  const Real D2 = p.D * p.D;
  return (d / D2 + (1 + d * x) / (c * p.D)) * p.decay_w - (c * d + b * c - a * d) / (c * D2) * p.ex_ac +
         d / D2 * p.e1_diff + p.one_m / (a * p.D);
}

template <class Real = double>
Real i3_mmse(const IntegralArgs<Real>& g, double eps_rel = kDefaultDegeneracyEps) {
  detail::check_family_args(g, eps_rel, "i3_mmse");
  if (g.x == 0) return 0;
  const auto [a, b, c, d, x] = g;
  const auto p = detail::mmse_pieces(g);
  const Real D2 = p.D * p.D;
  return (a / D2 + a * x / (c * p.D)) * p.decay_w +
         (a * d * d + a * b * d - b * b * c) / (d * d * D2) * p.e1_diff - a / D2 * p.ex_ac +
         p.one_m / (d * p.D);
}

// ---------------------------------------------------------------------------
// SER integrals
// ---------------------------------------------------------------------------

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// int_0^T sin^{2i} t dt via the binomial expansion of sin^{2i}.
inline double sin_power_integral(int i, double T) {
  double s = T / std::pow(2.0, 2 * i) * binomial(2 * i, i);
  double acc = 0.0;
  for (int k = 0; k < i; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(2 * i, k) * std::sin(2.0 * (i - k) * T) / (2.0 * (i - k));
  }
  const double lead = (i % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0, 2 * i - 1);
  return s + lead * acc;
}

}  // namespace detail

/// I~ = (1/pi) int_0^T (sin^2 t / g)^{n_R-1} dt in closed form.
inline double i_const_closed(std::size_t n_rx, const Modulation& mod) {
  if (n_rx < 2) throw ArgumentError("i_const_closed: n_R must be >= 2");
  const int n = static_cast<int>(n_rx);
  const double T = mod.t_max;
  double s = T / std::pow(2.0, 2 * (n - 1)) * detail::binomial(2 * n - 2, n - 1);
  double acc = 0.0;
  for (int k = 0; k <= n - 2; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * detail::binomial(2 * n - 2, k) * std::sin(2.0 * (n - k - 1) * T) / (2.0 * (n - k - 1));
  }
  s += ((n - 1) % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0, 2 * n - 3) * acc;
  return s / (std::numbers::pi * std::pow(mod.g, n - 1));
}

/// g0 = g / Tr(P1^{-1} P2).
inline double mmse_g0(const PowerProfile& p, const Modulation& mod) {
  double tr = 0.0;
  for (std::size_t i = 0; i < p.n_rx(); ++i) tr += p.p2(i) / p.p1(i);
  if (!(tr > 0.0)) throw DomainError("mmse_g0: Tr(P1^-1 P2) must be > 0");
  return mod.g / tr;
}

/// I(P1,P2) = (1/pi) int_0^T g^{-(n_R-1)} sin^{2 n_R} t / (g0 + sin^2 t) dt.
///
/// For g0 < 4 the closed form with the arctangent term is used, on its
/// continuous branch for T > pi/2. For larger g0 the same expansion is summed
/// as a convergent series in 1/g0, which avoids the g0^{n_R-1} cancellation.
inline double i_mmse_closed(std::size_t n_rx, const Modulation& mod, double g0) {
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw DomainError("i_mmse_closed: g0 must be finite and > 0");
  if (n_rx < 2) throw ArgumentError("i_mmse_closed: n_R must be >= 2");
  const int n = static_cast<int>(n_rx);
  const double T = mod.t_max;
  const double scale = 1.0 / (std::numbers::pi * std::pow(mod.g, n - 1));

  if (g0 < 4.0) {
    const double root = std::sqrt((1.0 + g0) / g0);
    const double arct = std::atan2(root * std::sin(T), std::cos(T));
    double poly = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      poly += sign * std::pow(g0, -i) * detail::sin_power_integral(i, T);
    }
    const double lead = (n % 2 == 0 ? 1.0 : -1.0) * std::pow(g0, n - 1);
    return lead * scale * (arct / root - poly);
  }

  // 1/(g0 + s) = sum_j (-s)^j / g0^{j+1}; S_m = int_0^T sin^{2m} by recurrence.
  const double sT = std::sin(T), cT = std::cos(T);
  double S = T;
  for (int m = 1; m <= n; ++m) S = (2.0 * m - 1.0) / (2.0 * m) * S - std::pow(sT, 2 * m - 1) * cT / (2.0 * m);
  double sum = 0.0;
  double inv = 1.0 / g0;
  for (int j = 0; j < 2000; ++j) {
    const double term = ((j % 2 == 0) ? 1.0 : -1.0) * inv * S;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    const int m = n + j + 1;
    S = (2.0 * m - 1.0) / (2.0 * m) * S - std::pow(sT, 2 * m - 1) * cT / (2.0 * m);
    inv /= g0;
  }
  return scale * sum;
}

inline double i_mmse_closed(const PowerProfile& p, const Modulation& mod) {
  return i_mmse_closed(p.n_rx(), mod, mmse_g0(p, mod));
}

/// I_e(P1,P2) = I~ sum_i Ups_i P_{i2}
///   + 1/(pi g^{n_R-1}) sum_i { Phi_i H(n_R-1, g r_i) - g Ups_i P_{i1} H(n_R-2, g r_i) },
/// r_i = P_{i1}/P_{i2}.
inline double i_exact_mmse(const PowerProfile& p, const Modulation& mod, double eps_rel = kDefaultDegeneracyEps) {
  const std::size_t n = p.n_rx();
  const auto ups = upsilon_all(p, eps_rel);
  const double g = mod.g;
  double base = 0.0;
  for (std::size_t i = 0; i < n; ++i) base += ups[i] * p.p2(i);
  double h_sum = 0.0;
  const int m = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = g * p.p1(i) / p.p2(i);
    h_sum += phi_i(p, i, eps_rel) * h_integral(m - 1, a, mod.t_max) -
             g * ups[i] * p.p1(i) * h_integral(m - 2, a, mod.t_max);
  }
  return i_const_closed(n, mod) * base + h_sum / (std::numbers::pi * std::pow(g, m - 1));
}

/// A_i = b_i^{n-2} / prod_{k != i} (b_i a_k - a_i b_k), so that
/// 1 / prod_i (a_i - j t b_i) = sum_i A_i / (a_i/b_i - j t).
inline std::vector<double> partial_fraction_coeffs(std::span<const double> a, std::span<const double> b,
                                                   double eps_rel = kDefaultDegeneracyEps) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError("partial_fraction_coeffs: size mismatch");
  const std::size_t n = a.size();
  std::vector<double> A(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(b[i] > 0.0)) throw DomainError("partial_fraction_coeffs: b must be > 0");
    double den = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double x = b[i] * a[k], y = a[i] * b[k];
      if (!(std::abs(x - y) >= eps_rel * std::max(std::abs(x), std::abs(y))))
        throw DegeneracyError("partial_fraction_coeffs: repeated pole", i, k);
      den *= x - y;
    }
    A[i] = std::pow(b[i], static_cast<double>(n) - 2.0) / den;
  }
  return A;
}

}  // namespace macrodiv
