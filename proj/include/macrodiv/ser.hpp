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

// MPSK symbol error rate: P_s = (1/pi) int_0^T M_Z(-g / sin^2 t) dt.
//
// High-SNR power laws (Laplace and exact) plus two Monte Carlo estimators of
// the same integral.

#include "macrodiv/asymptotic_coefficients.hpp"
#include "macrodiv/closed_form_integrals.hpp"
#include "macrodiv/core_types.hpp"
#include "macrodiv/montecarlo.hpp"
#include "macrodiv/special_fn.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace macrodiv {

struct ThetaMetric {
  double value;
};

/// Tr(P2) / (|P1| Tr(P1^{-1} P2)).
inline ThetaMetric theta_metric(const PowerProfile& p) {
  double det = 1.0, tr_ratio = 0.0;
  for (std::size_t i = 0; i < p.n_rx(); ++i) {
    det *= p.p1(i);
    tr_ratio += p.p2(i) / p.p1(i);
  }
  return {p.trace_p2() / (det * tr_ratio)};
}

enum class SerMethod { laplace_zf, laplace_mmse, exact_zf, exact_mmse };

inline std::string_view to_string(SerMethod m) {
  switch (m) {
    case SerMethod::laplace_zf: return "laplace_zf";
    case SerMethod::laplace_mmse: return "laplace_mmse";
    case SerMethod::exact_zf: return "exact_zf";
    case SerMethod::exact_mmse: return "exact_mmse";
  }
  return "?";
}

/// P_s ~ (G_a * snr)^{-G_d}, snr = 1/sigma^2.
struct SerAsymptote {
  double diversity_gain;
  double array_gain;
  SerMethod method;

  double at_sigma2(double sigma2) const { return std::pow(array_gain / sigma2, -diversity_gain); }
  double at_snr_db(double snr_db) const { return at_sigma2(1.0 / db_to_linear(snr_db)); }
};

namespace detail {
// Coefficient C of P_s ~ C sigma^{2(n_R-1)}.
inline SerAsymptote asymptote_from_coefficient(std::size_t n_rx, double coeff, SerMethod m) {
  const double gd = static_cast<double>(n_rx) - 1.0;
  return {gd, std::pow(coeff, -1.0 / gd), m};
}

inline double noise_power_law(std::size_t n_rx, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("sigma2 must be > 0");
  return std::pow(sigma2, static_cast<double>(n_rx) - 1.0);
}
}  // namespace detail

inline SerAsymptote asymptote_zf_laplace(const PowerProfile& p, const Modulation& mod) {
  return detail::asymptote_from_coefficient(p.n_rx(), theta_metric(p).value * i_const_closed(p.n_rx(), mod),
                                            SerMethod::laplace_zf);
}

inline SerAsymptote asymptote_mmse_laplace(const PowerProfile& p, const Modulation& mod) {
  return detail::asymptote_from_coefficient(p.n_rx(), theta_metric(p).value * i_mmse_closed(p, mod),
                                            SerMethod::laplace_mmse);
}

inline SerAsymptote asymptote_zf_exact(const PowerProfile& p, const Modulation& mod,
                                       double eps_rel = kDefaultDegeneracyEps) {
  return detail::asymptote_from_coefficient(p.n_rx(), k0_tilde(p, eps_rel) * i_const_closed(p.n_rx(), mod),
                                            SerMethod::exact_zf);
}

inline SerAsymptote asymptote_mmse_exact(const PowerProfile& p, const Modulation& mod,
                                         double eps_rel = kDefaultDegeneracyEps) {
  return detail::asymptote_from_coefficient(p.n_rx(), i_exact_mmse(p, mod, eps_rel), SerMethod::exact_mmse);
}

/// theta * I~ * sigma^{2(n_R-1)}
inline double ser_zf_laplace(const PowerProfile& p, double sigma2, const Modulation& mod) {
  return theta_metric(p).value * i_const_closed(p.n_rx(), mod) * detail::noise_power_law(p.n_rx(), sigma2);
}

/// theta * I(P1,P2) * sigma^{2(n_R-1)}
inline double ser_mmse_laplace(const PowerProfile& p, double sigma2, const Modulation& mod) {
  return theta_metric(p).value * i_mmse_closed(p, mod) * detail::noise_power_law(p.n_rx(), sigma2);
}

/// K~0 * I~ * sigma^{2(n_R-1)}
inline double ser_zf_exact_asym(const PowerProfile& p, double sigma2, const Modulation& mod,
                                double eps_rel = kDefaultDegeneracyEps) {
  return k0_tilde(p, eps_rel) * i_const_closed(p.n_rx(), mod) * detail::noise_power_law(p.n_rx(), sigma2);
}

/// I_e * sigma^{2(n_R-1)}
inline double ser_mmse_exact_asym(const PowerProfile& p, double sigma2, const Modulation& mod,
                                  double eps_rel = kDefaultDegeneracyEps) {
  return i_exact_mmse(p, mod, eps_rel) * detail::noise_power_law(p.n_rx(), sigma2);
}

// ---- Monte Carlo SER -------------------------------------------------------

struct SerEstimate {
  double value;
  double standard_error;
};

namespace detail {
inline SerEstimate mean_and_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double m = pairwise_sum(v) / n;
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - m) * (v[i] - m);
  const double var = v.size() > 1 ? pairwise_sum(d) / (n - 1.0) : 0.0;
  return {m, std::sqrt(var / n)};
}

// Nodes and weights of the 64-point rule mapped onto [0, T], weights / pi folded in.
struct ThetaRule {
  std::vector<double> s2;  // sin^2 at the nodes
  std::vector<double> w;
};

inline ThetaRule theta_rule(const Modulation& mod) {
  const auto& gl = gauss_legendre_64();
  ThetaRule r;
  const double h = 0.5 * mod.t_max;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double t = h * (gl.nodes[j] + 1.0);
    const double s = std::sin(t);
    r.s2.push_back(s * s);
    r.w.push_back(h * gl.weights[j] / std::numbers::pi);
  }
  return r;
}
}  // namespace detail

/// Conditional MPSK SER given SINR z, (1/pi) int_0^T exp(-g z / sin^2 t) dt.
inline double mpsk_conditional_ser(double z, const Modulation& mod) {
  const auto r = detail::theta_rule(mod);
  double s = 0.0;
  for (std::size_t j = 0; j < r.w.size(); ++j) s += r.w[j] * std::exp(-mod.g * z / r.s2[j]);
  return s;
}

/// Sample average of the conditional MPSK SER over SINR samples.
inline SerEstimate ser_semianalytic_with_error(std::span<const double> samples, const Modulation& mod) {
  if (samples.empty()) throw ArgumentError("ser_semianalytic: empty sample set");
  const auto r = detail::theta_rule(mod);
  std::vector<double> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] > 0.0)) throw ArgumentError("ser_semianalytic: samples must be > 0");
    double s = 0.0;
    for (std::size_t j = 0; j < r.w.size(); ++j) s += r.w[j] * std::exp(-mod.g * samples[i] / r.s2[j]);
    v[i] = s;
  }
  return detail::mean_and_se(v);
}

inline double ser_semianalytic(std::span<const double> samples, const Modulation& mod) {
  return ser_semianalytic_with_error(samples, mod).value;
}

/// MC SER with h1 integrated out analytically. For fixed h2 the output SINR
/// is a Hermitian form in h1 ~ CN(0, P1), whose MGF at -s is
///   ZF:   sum|h2_i|^2 / (prod d_i * sum |h2_i|^2/d_i)
///   MMSE: (s2 + sum|h2_i|^2) / (prod d_i * (s2 + sum |h2_i|^2/d_i)),
/// d_i = 1 + s P_{i1} / s2. Averaging over h2 draws alone keeps the relative
/// variance bounded as the SER goes to zero.
inline SerEstimate ser_mc_conditional(const PowerProfile& p, double sigma2, Receiver receiver,
                                      const Modulation& mod, std::size_t n_samples, std::uint64_t seed,
                                      unsigned workers = 1) {
  if (n_samples < 2) throw ArgumentError("ser_mc_conditional: need at least two samples");
  if (!(sigma2 > 0.0)) throw ArgumentError("ser_mc_conditional: sigma2 must be > 0");
  const std::size_t n = p.n_rx();
  const auto rule = detail::theta_rule(mod);
  const GaussianStream rng(seed);
  std::vector<double> v(n_samples);
  parallel_chunks(n_samples, workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> q(n);
    for (std::size_t r = lo; r < hi; ++r) {
      double tot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        // Same stream slots as the h2 entries of sample_channel.
        q[i] = p.p2(i) * std::norm(rng.normal(r, static_cast<std::uint32_t>(n + i)));
        tot += q[i];
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < rule.w.size(); ++j) {
        const double s = mod.g / rule.s2[j];
        double prod = 1.0, frac = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = 1.0 + s * p.p1(i) / sigma2;
          prod *= d;
          frac += q[i] / d;
        }
        const double mgf = receiver == Receiver::zf ? tot / (prod * frac)
                                                    : (sigma2 + tot) / (prod * (sigma2 + frac));
        acc += rule.w[j] * mgf;
      }
      v[r] = acc;
    }
  });
  return detail::mean_and_se(v);
}

}  // namespace macrodiv
