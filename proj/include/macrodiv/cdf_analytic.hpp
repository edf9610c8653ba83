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

// Exact CDFs of the ZF output SNR and the MMSE output SINR.
//
// Both are finite double sums over ordered antenna pairs (i, k), i != k, of
// three closed-form integrals weighted by constants that depend only on the
// power profile and the noise power:
//
//   F_ZF(z)   = s2 sum phi~ I~1 + psi~ I~2 + omega~ I~3   at (n~, a~, m~, b~, z)
//   F_MMSE(z) = s2 sum phi  I1  + psi  I2  + omega  I3    at (s2 n~, a~, m~, b~/s2, z)
//
// The terms individually blow up like 1/(pairwise power differences) and
// cancel in the sum. After jitter the differences are O(delta) and the
// cancellation eats ~15 digits, so the assembly runs in 113-bit precision.

#include "macrodiv/closed_form_integrals.hpp"
#include "macrodiv/core_types.hpp"
#include "macrodiv/errors.hpp"
#include "macrodiv/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace macrodiv {

template <class Real>
using Table = std::vector<std::vector<Real>>;

/// Coefficient tables of both closed-form CDFs. Diagonal entries of the
/// (i, k) tables are unused and left at zero.
template <class Real = wide_real>
struct ConstantSet {
  std::size_t n = 0;
  Real sigma2 = 0;
  std::vector<Real> p1, p2;

  Table<Real> n_tilde, m_tilde;
  std::vector<Real> alpha_tilde, beta_tilde;
  Table<Real> eta_tilde, xi_tilde, zeta_tilde;
  std::vector<Real> delta_tilde;

  // ZF weights.
  Table<Real> phi_tilde, psi_tilde, omega_tilde;
  // MMSE weights.
  Table<Real> phi, psi, omega;
};

namespace detail {
template <class Real>
Table<Real> square_table(std::size_t n) {
  return Table<Real>(n, std::vector<Real>(n, Real(0)));
}

template <class Real>
Real ipow(Real x, int e) {
  if (e == 0) return Real(1);
  if (e < 0) return Real(1) / ipow(x, -e);
  Real r = 1;
  for (int j = 0; j < e; ++j) r *= x;
  return r;
}
}  // namespace detail

/// Fills every table from the profile and noise power. Rejects profiles that
/// validate_profile flags, naming the first offending antenna pair.
template <class Real = wide_real>
ConstantSet<Real> build_constants(const PowerProfile& profile, double sigma2,
                                  double eps_rel = kDefaultDegeneracyEps) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ArgumentError("build_constants: sigma2 must be > 0");
  if (const auto rep = validate_profile(profile, eps_rel); rep.degenerate()) {
    const auto& f = rep.pairs.front();
    throw DegeneracyError("build_constants: " + rep.describe(), f.i, f.k);
  }

  const std::size_t n = profile.n_rx();
  const int nr = static_cast<int>(n);
  ConstantSet<Real> c;
  c.n = n;
  c.sigma2 = static_cast<Real>(sigma2);
  c.p1.assign(profile.p1().begin(), profile.p1().end());
  c.p2.assign(profile.p2().begin(), profile.p2().end());
  const auto& P1 = c.p1;
  const auto& P2 = c.p2;
  const Real s2 = c.sigma2;

  c.n_tilde = detail::square_table<Real>(n);
  c.m_tilde = detail::square_table<Real>(n);
  c.eta_tilde = detail::square_table<Real>(n);
  c.xi_tilde = detail::square_table<Real>(n);
  c.zeta_tilde = detail::square_table<Real>(n);
  c.alpha_tilde.resize(n);
  c.beta_tilde.resize(n);
  c.delta_tilde.assign(n, Real(0));

  for (std::size_t i = 0; i < n; ++i) {
    c.alpha_tilde[i] = s2 / P1[i];
    c.beta_tilde[i] = s2 * P2[i] / P1[i];
    for (std::size_t k = 0; k < n; ++k) {
      c.n_tilde[i][k] = P1[i] - P1[k];
      c.m_tilde[i][k] = P1[i] * P2[k] - P1[k] * P2[i];
    }
  }
  const auto& nt = c.n_tilde;
  const auto& mt = c.m_tilde;
  auto cross = [&](std::size_t i, std::size_t k, std::size_t l) { return nt[i][l] * mt[i][k] - nt[i][k] * mt[i][l]; };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      Real den = 1;
      for (std::size_t l = 0; l < n; ++l)
        if (l != i && l != k) den *= cross(i, k, l);
      c.eta_tilde[i][k] = detail::ipow(mt[i][k], nr - 2) / den;
      c.xi_tilde[i][k] = nt[i][k] * (P1[i] * P2[k] * P2[k] - P1[k] * P2[i] * P2[i]) / mt[i][k];
      c.delta_tilde[i] += P2[i] * P2[k] * nt[i][k] / mt[i][k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      Real s = 0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == k) continue;
        s += (c.eta_tilde[i][k] * c.xi_tilde[i][l] + c.eta_tilde[i][l] * c.xi_tilde[i][k]) / cross(i, k, l);
      }
      c.zeta_tilde[i][k] = mt[i][k] * s;
    }
  }

  c.phi_tilde = detail::square_table<Real>(n);
  c.psi_tilde = detail::square_table<Real>(n);
  c.omega_tilde = detail::square_table<Real>(n);
  c.phi = detail::square_table<Real>(n);
  c.psi = detail::square_table<Real>(n);
  c.omega = detail::square_table<Real>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real pw2 = detail::ipow(P1[i], nr - 2);
    const Real pw3 = detail::ipow(P1[i], nr - 3);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const Real eta = c.eta_tilde[i][k];
      c.phi_tilde[i][k] = pw2 * (c.delta_tilde[i] * eta - (nr - 2) * P2[i] * eta + c.zeta_tilde[i][k]);
      c.psi_tilde[i][k] = eta * c.xi_tilde[i][k] * pw2;
      // The sigma^2 here comes from the x*theta*sigma^2 term that I~3 absorbs.
      c.omega_tilde[i][k] = -s2 * pw3 * eta * P2[i] * P2[i];

      c.phi[i][k] = pw2 * (s2 * eta + c.delta_tilde[i] * eta + c.zeta_tilde[i][k] - (nr - 2) * P2[i] * eta);
      c.psi[i][k] = s2 * pw2 * eta * c.xi_tilde[i][k];
      c.omega[i][k] = -P2[i] * P2[i] * pw3 * eta;
    }
  }
  return c;
}

/// Raw closed-form sums, no clamping. Exposed for tests and for evaluators
/// built from hand-modified constants.
template <class Real>
Real zf_cdf_raw(const ConstantSet<Real>& c, Real z, double eps_rel = kDefaultDegeneracyEps) {
  Real F = 0;
  for (std::size_t i = 0; i < c.n; ++i) {
    for (std::size_t k = 0; k < c.n; ++k) {
      if (k == i) continue;
      const IntegralArgs<Real> g{c.n_tilde[i][k], c.alpha_tilde[i], c.m_tilde[i][k], c.beta_tilde[i], z};
      F += c.phi_tilde[i][k] * i1_tilde(g, eps_rel) + c.psi_tilde[i][k] * i2_tilde(g, eps_rel) +
           c.omega_tilde[i][k] * i3_tilde(g, eps_rel);
    }
  }
  return c.sigma2 * F;
}

template <class Real>
Real mmse_cdf_raw(const ConstantSet<Real>& c, Real z, double eps_rel = kDefaultDegeneracyEps) {
  Real F = 0;
  const Real s2 = c.sigma2;
  for (std::size_t i = 0; i < c.n; ++i) {
    for (std::size_t k = 0; k < c.n; ++k) {
      if (k == i) continue;
      const IntegralArgs<Real> g{s2 * c.n_tilde[i][k], c.alpha_tilde[i], c.m_tilde[i][k], c.beta_tilde[i] / s2, z};
      F += c.phi[i][k] * i1_mmse(g, eps_rel) + c.psi[i][k] * i2_mmse(g, eps_rel) +
           c.omega[i][k] * i3_mmse(g, eps_rel);
    }
  }
  return s2 * F;
}

/// Perturbs a (near-)degenerate profile deterministically:
/// P_{i1} <- P_{i1}(1 + i delta), P_{i2} <- P_{i2}(1 + i^2 delta), i = 1..n_R.
/// The interferer column needs its own, non-proportional perturbation: with a
/// uniform P2 every eta~ denominator vanishes identically otherwise.
inline PowerProfile apply_jitter(const PowerProfile& p, double delta) {
  if (!(delta > 0.0 && delta <= 1e-3)) throw ArgumentError("apply_jitter: delta must lie in (0, 1e-3]");
  std::vector<double> a(p.p1().begin(), p.p1().end());
  std::vector<double> b(p.p2().begin(), p.p2().end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double idx = static_cast<double>(i + 1);
    a[i] *= 1.0 + idx * delta;
    b[i] *= 1.0 + idx * idx * delta;
  }
  std::vector<double> hist(p.jitter_history().begin(), p.jitter_history().end());
  hist.push_back(delta);
  return PowerProfile(std::move(a), std::move(b), std::move(hist));
}

struct CdfOptions {
  double eps_rel = kDefaultDegeneracyEps;
  bool auto_jitter = true;
  double jitter_delta = 1e-5;
  /// Raw values in [-tol, 0) and (1, 1 + tol] are clamped; beyond that the
  /// evaluation fails with NumericalError.
  double range_tolerance = 1e-9;
  /// Profiles whose relative pair gaps fall below this are summed in the
  /// 113-bit type. The sums cancel terms of size ~gap^-3; at the jitter
  /// scale that eats all of long double.
  double wide_gap = 1e-2;
};

/// Constants in long double, or in the wide type for near-degenerate profiles.
using AnyConstantSet = std::variant<ConstantSet<long double>, ConstantSet<wide_real>>;

struct CdfValue {
  double value;    // clamped to [0, 1]
  double raw;      // closed-form sum
  bool clamped;
};

/// Immutable evaluator of one receiver's CDF for one (profile, sigma^2).
/// Constants are built once; every z is evaluated from scratch.
class CdfEvaluator {
public:
  static CdfEvaluator build(const PowerProfile& profile, double sigma2, Receiver receiver, CdfOptions opts = {}) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ArgumentError("CdfEvaluator: sigma2 must be > 0");
    std::vector<std::string> notes;
    PowerProfile effective = profile;
    std::optional<double> jitter;
    if (profile.jittered())
      notes.push_back("profile was already jittered " + std::to_string(profile.jitter_history().size()) +
                      " time(s) before evaluation");
    const auto report = validate_profile(profile, opts.eps_rel);
    if (report.degenerate()) {
      if (!opts.auto_jitter) {
        const auto& f = report.pairs.front();
        throw DegeneracyError(report.describe(), f.i, f.k);
      }
      effective = apply_jitter(profile, opts.jitter_delta);
      jitter = opts.jitter_delta;
      std::ostringstream os;
      os << "warning: " << report.describe() << "; applied deterministic jitter delta=" << opts.jitter_delta;
      notes.push_back(os.str());
      if (effective.jitter_history().size() > 1)
        notes.push_back("warning: jitter applied more than once to the same profile");
      if (const auto again = validate_profile(effective, opts.eps_rel); again.degenerate()) {
        const auto& f = again.pairs.front();
        throw DegeneracyError("degeneracy persists after jitter: " + again.describe(), f.i, f.k);
      }
    }
    const bool wide = jitter.has_value() || validate_profile(effective, opts.wide_gap).degenerate();
    AnyConstantSet constants;
    if (wide)
      constants = build_constants<wide_real>(effective, sigma2, opts.eps_rel);
    else
      constants = build_constants<long double>(effective, sigma2, opts.eps_rel);
    CdfEvaluator ev(profile, std::move(effective), sigma2, receiver, std::move(constants), opts);
    ev.jitter_ = jitter;
    ev.notes_ = std::move(notes);
    return ev;
  }

  /// Evaluator over caller-supplied constants (used to check that the
  /// validation suite catches corrupted coefficient tables).
  CdfEvaluator(const PowerProfile& profile, double sigma2, Receiver receiver, AnyConstantSet constants,
               CdfOptions opts = {})
      : CdfEvaluator(profile, profile, sigma2, receiver, std::move(constants), opts) {}

  Receiver receiver() const noexcept { return receiver_; }
  double sigma2() const noexcept { return sigma2_; }
  const PowerProfile& profile() const noexcept { return original_; }
  const PowerProfile& effective_profile() const noexcept { return effective_; }
  const AnyConstantSet& constants() const noexcept { return constants_; }
  bool wide_precision() const noexcept { return constants_.index() == 1; }
  std::optional<double> jitter_applied() const noexcept { return jitter_; }
  const std::vector<std::string>& diagnostics() const noexcept { return notes_; }
  const CdfOptions& options() const noexcept { return opts_; }

  double range_tolerance() const noexcept { return opts_.range_tolerance; }

  CdfValue evaluate(double z) const {
    if (!(z >= 0.0)) throw DomainError("cdf: z must be >= 0");
    if (std::isinf(z)) return {1.0, 1.0, false};
    const double r = std::visit(
        [&](const auto& c) {
          using R = std::decay_t<decltype(c.sigma2)>;
          const R zr = z;
          return static_cast<double>(receiver_ == Receiver::zf ? zf_cdf_raw(c, zr, opts_.eps_rel)
                                                               : mmse_cdf_raw(c, zr, opts_.eps_rel));
        },
        constants_);
    const double tol = range_tolerance();
    if (!std::isfinite(r) || r < -tol || r > 1.0 + tol) {
      std::ostringstream os;
      os << "cdf(" << z << ") = " << r << " outside [-" << tol << ", 1+" << tol << "]";
      throw NumericalError(os.str());
    }
    if (r < 0.0) return {0.0, r, true};
    if (r > 1.0) return {1.0, r, true};
    return {r, r, false};
  }

  double operator()(double z) const { return evaluate(z).value; }

private:
  CdfEvaluator(PowerProfile original, PowerProfile effective, double sigma2, Receiver receiver,
               AnyConstantSet constants, CdfOptions opts)
      : original_(std::move(original)),
        effective_(std::move(effective)),
        sigma2_(sigma2),
        receiver_(receiver),
        constants_(std::move(constants)),
        opts_(opts) {}

  PowerProfile original_;
  PowerProfile effective_;
  double sigma2_;
  Receiver receiver_;
  AnyConstantSet constants_;
  CdfOptions opts_;
  std::optional<double> jitter_;
  std::vector<std::string> notes_;
};

inline double zf_cdf(const CdfEvaluator& ev, double z) {
  if (ev.receiver() != Receiver::zf) throw ArgumentError("zf_cdf: evaluator was built for the MMSE receiver");
  return ev(z);
}

inline double mmse_cdf(const CdfEvaluator& ev, double z) {
  if (ev.receiver() != Receiver::mmse) throw ArgumentError("mmse_cdf: evaluator was built for the ZF receiver");
  return ev(z);
}

/// Central difference of the CDF, floored at zero.
inline double pdf_numeric(const CdfEvaluator& ev, double z, double h) {
  if (!(h > 0.0) || !(z > h)) throw ArgumentError("pdf_numeric: need h > 0 and z > h");
  const double d = (ev(z + h) - ev(z - h)) / (2.0 * h);
  return d > 0.0 ? d : 0.0;
}

inline double outage_probability(const CdfEvaluator& ev, double threshold) {
  if (!(threshold >= 0.0)) throw DomainError("outage_probability: threshold must be >= 0");
  return ev(threshold);
}

/// Smallest z on a bisection grid with F(z) >= q (q in (0,1)).
inline double cdf_quantile(const CdfEvaluator& ev, double q, double rel_tol = 1e-10) {
  if (!(q > 0.0 && q < 1.0)) throw ArgumentError("cdf_quantile: q must lie in (0,1)");
  double lo = 0.0, hi = 1.0;
  const double mean_scale = ev.effective_profile().trace_p1() / ev.sigma2();
  hi = std::max(hi, mean_scale);
  while (ev(hi) < q) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ev(mid) < q ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace macrodiv
