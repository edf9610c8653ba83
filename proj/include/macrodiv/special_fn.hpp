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

// Exponential integrals, adaptive Gauss-Kronrod quadrature, Gauss-Legendre
// rules and the H(m, a) trigonometric integral of the exact MMSE asymptote.
//
// E1 and its scaled form are templates so that the CDF assembly can run in
// extended precision; everything else works in double.

#include "macrodiv/errors.hpp"
#include "macrodiv/real.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace macrodiv {

namespace detail {

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), for small x.
template <class Real>
Real e1_series(Real x) {
  const Real eps = math::epsilon<Real>();
  Real term = 1;
  Real sum = 0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const Real add = term / k;
    sum += add;
    if (math::abs(add) < eps * math::abs(sum)) break;
  }
  return -math::egamma<Real>() - math::log(x) - sum;
}

// Where the series takes over from the continued fraction. The series loses
// ~e^{2x} relative to eps; only the 113-bit type can afford that past x = 1,
// and there the fraction is slow (hundreds of terms near x = 1).
template <class Real>
Real e1_series_limit() {
  return math::epsilon<Real>() < Real(1e-30) ? Real(6) : Real(1);
}

// e^x E1(x) by the continued fraction 1/(x+1- 1/(x+3- 4/(x+5- ...))), x > 1.
template <class Real>
Real e1_scaled_cf(Real x) {
  const Real eps = math::epsilon<Real>();
  const Real tiny = math::min_normal<Real>() / eps;
  Real b = x + 1;
  Real c = 1 / tiny;
  Real d = 1 / b;
  Real h = d;
  for (int i = 1; i < 100000; ++i) {
    const Real an = -static_cast<Real>(i) * i;
    b += 2;
    d = 1 / (an * d + b);
    c = b + an / c;
    const Real del = c * d;
    h *= del;
    if (math::abs(del - 1) <= eps) break;
  }
  return h;
}

// e^{-y} Ei(y) for y > 0.
template <class Real>
Real ei_scaled_positive(Real y) {
  const Real eps = math::epsilon<Real>();
  // The asymptotic series is good to ~e^{-y}; switch once that is below eps.
  if (y > 5 - math::log(eps)) {
    // e^{-y} Ei(y) ~ (1/y) sum k!/y^k, truncated at the smallest term.
    Real term = 1;
    Real sum = 1;
    for (int k = 1; k < 200; ++k) {
      const Real next = term * k / y;
      if (next > term) break;
      term = next;
      sum += term;
      if (term < eps * sum) break;
    }
    return sum / y;
  }
  // Ei(y) = gamma + ln y + sum y^k / (k k!); all terms positive.
  Real term = 1;
  Real sum = 0;
  for (int k = 1; k < 1000; ++k) {
    term *= y / k;
    const Real add = term / k;
    sum += add;
    if (add < eps * sum) break;
  }
  return math::exp(-y) * (math::egamma<Real>() + math::log(y) + sum);
}

}  // namespace detail

/// E1(x) = int_x^inf e^{-t}/t dt for x > 0.
template <class Real = double>
Real exp_e1(Real x) {
  if (!(x > 0)) throw DomainError("exp_e1: argument must be > 0");
  if (x <= detail::e1_series_limit<Real>()) return detail::e1_series(x);
  return math::exp(-x) * detail::e1_scaled_cf(x);
}

/// e^x E1(x) for x > 0, finite for every representable x.
template <class Real = double>
Real exp_e1_scaled(Real x) {
  if (!(x > 0)) throw DomainError("exp_e1_scaled: argument must be > 0");
  if (x <= detail::e1_series_limit<Real>()) return math::exp(x) * detail::e1_series(x);
  return detail::e1_scaled_cf(x);
}

/// Real principal-value continuation of E1: E1(-y) = -Ei(y) for y > 0.
/// The closed-form CDF terms hit negative arguments whenever a partial
/// fraction pole lands on the positive axis; the poles cancel across terms.
template <class Real = double>
Real exp_e1_pv(Real x) {
  if (x > 0) return exp_e1(x);
  if (x < 0) {
    const Real y = -x;
    return -math::exp(y) * detail::ei_scaled_positive(y);
  }
  throw DomainError("exp_e1_pv: argument must be nonzero");
}

/// e^x E1(x) with the same continuation for x < 0: -e^{-y} Ei(y), y = -x.
template <class Real = double>
Real exp_e1_scaled_pv(Real x) {
  if (x > 0) return exp_e1_scaled(x);
  if (x < 0) return -detail::ei_scaled_positive(-x);
  throw DomainError("exp_e1_scaled_pv: argument must be nonzero");
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kron = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[j] * fsum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * fsum;
  }
  return {lo, hi, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration with a global error queue.
/// `hi` may be +infinity; the tail is mapped to [0,1) by t = lo + u/(1-u).
/// Never evaluates f at an endpoint. Returns the best estimate even when the
/// tolerance is not met; `converged` tells which.
namespace detail {
// Finite interval, lo < hi.
template <class F>
QuadratureResult quad_finite(F& f, double lo, double hi, const QuadratureSpec& spec) {
  std::priority_queue<Segment> heap;
  auto first = gauss_kronrod_15(f, lo, hi);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) return {total, err, splits, false};
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval no longer divisible in double precision.
      return {total, err, splits, false};
    }
    auto left = gauss_kronrod_15(f, worst.lo, mid);
    auto right = gauss_kronrod_15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (err < 0) err = 0;  // running sum drift
  }
  // Re-sum to shed accumulated round-off of the running totals.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  return {v, e, splits, true};
}
}  // namespace detail

template <class F>
QuadratureResult quad_adaptive_result(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  if (!(spec.abs_tol >= 0.0) || !(spec.rel_tol >= 0.0) || spec.max_subdivisions < 1)
    throw ArgumentError("quad_adaptive: tolerances must be >= 0 and max_subdivisions >= 1");
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) throw ArgumentError("quad_adaptive: bad limits");
  if (lo == hi) return {0.0, 0.0, 0, true};
  const double sign = hi < lo ? -1.0 : 1.0;
  if (hi < lo) std::swap(lo, hi);
  QuadratureResult r;
  if (std::isinf(hi)) {
    auto g = [&f, lo](double u) {
      const double om = 1.0 - u;
      return f(lo + u / om) / (om * om);
    };
    r = detail::quad_finite(g, 0.0, 1.0, spec);
  } else {
    r = detail::quad_finite(f, lo, hi, spec);
  }
  r.value *= sign;
  return r;
}

/// Throwing variant: AccuracyError carries the best estimate on non-convergence.
template <class F>
double quad_adaptive(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  const auto r = quad_adaptive_result(std::forward<F>(f), lo, hi, spec);
  if (!r.converged)
    throw AccuracyError("quad_adaptive: tolerance not reached after " + std::to_string(r.subdivisions) +
                            " subdivisions",
                        r.value, r.error);
  return r.value;
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// The fixed 64-point rule used by the semi-analytic SER estimators.
inline const GaussLegendreRule& gauss_legendre_64() {
  static const GaussLegendreRule rule = gauss_legendre(64);
  return rule;
}

/// H(m, a) = int_0^T e^{a/sin^2 t} E1(a/sin^2 t) sin^{2m} t dt.
///
/// Evaluated with the scaled exponential integral, so e^{a/sin^2 t} is never
/// formed on its own. The integrand vanishes at both ends of (0, pi).
inline double h_integral(int m, double a, double t_max, const QuadratureSpec& spec = {0.0, 1e-11, 4000}) {
  if (!(a > 0.0)) throw DomainError("h_integral: a must be > 0");
  if (m < 0) throw DomainError("h_integral: m must be >= 0");
  if (!(t_max > 0.0 && t_max < std::numbers::pi)) throw DomainError("h_integral: t_max must lie in (0, pi)");
  auto integrand = [m, a](double t) {
    const double s2 = std::sin(t) * std::sin(t);
    if (s2 == 0.0) return 0.0;
    return exp_e1_scaled(a / s2) * std::pow(s2, m);
  };
  return quad_adaptive(integrand, 0.0, t_max, spec);
}

}  // namespace macrodiv
