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

// Monte Carlo ground truth for the two-user flat Rayleigh uplink r = Hs + n.
//
// Every random number is a pure function of (seed, realization, entry,
// attempt) through a Philox4x32-10 counter-based generator, so a run is the
// same sample set whatever the number of worker threads.

#include "macrodiv/core_types.hpp"
#include "macrodiv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

namespace macrodiv {

using cplx = std::complex<double>;

// ---- generator ------------------------------------------------------------

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: one call maps
/// a 128-bit counter and a 64-bit key to 128 random bits.
class Philox4x32 {
public:
  using Block = std::array<std::uint32_t, 4>;

  explicit constexpr Philox4x32(std::uint64_t key) noexcept
      : k0_(static_cast<std::uint32_t>(key)), k1_(static_cast<std::uint32_t>(key >> 32)) {}

  constexpr Block operator()(Block c) const noexcept {
    std::uint32_t k0 = k0_, k1 = k1_;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kW0;
      k1 += kW1;
    }
    return c;
  }

private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  std::uint32_t k0_, k1_;
};

/// Uniform on the open interval (0, 1) from 64 random bits.
inline double uniform_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Addressable stream of CN(0,1) variates: normal(realization, entry, attempt).
class GaussianStream {
public:
  explicit constexpr GaussianStream(std::uint64_t seed) noexcept : gen_(seed) {}

  /// Real and imaginary parts independent N(0, 1/2), via Box-Muller.
  cplx normal(std::uint64_t realization, std::uint32_t entry, std::uint32_t attempt = 0) const noexcept {
    const auto b = gen_({static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(realization >> 32),
                         entry, attempt});
    const double u1 = uniform_open((std::uint64_t{b[0]} << 32) | b[1]);
    const double u2 = uniform_open((std::uint64_t{b[2]} << 32) | b[3]);
    const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u) * sqrt(1/2)
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

private:
  Philox4x32 gen_;
};

// ---- channel and receivers -------------------------------------------------

struct ChannelRealization {
  std::vector<cplx> h1;  // desired user's column of H
  std::vector<cplx> h2;  // interferer's column
};

/// H_{ik} ~ CN(0, P_{ik}). Entries 0..n-1 of the stream feed h1, n..2n-1 feed h2.
inline ChannelRealization sample_channel(const PowerProfile& p, const GaussianStream& rng,
                                         std::uint64_t realization, std::uint32_t attempt = 0) {
  const std::size_t n = p.n_rx();
  ChannelRealization ch{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    ch.h1[i] = std::sqrt(p.p1(i)) * rng.normal(realization, static_cast<std::uint32_t>(i), attempt);
    ch.h2[i] = std::sqrt(p.p2(i)) * rng.normal(realization, static_cast<std::uint32_t>(n + i), attempt);
  }
  return ch;
}

namespace detail {
inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

// a^H b
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}
}  // namespace detail

/// h1^H (h2 h2^H + s2 I)^{-1} h1 by Sherman-Morrison.
inline double mmse_sinr(const ChannelRealization& ch, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("mmse_sinr: sigma2 must be > 0");
  const double a = detail::norm2(ch.h1);
  const double b = detail::norm2(ch.h2);
  const double c = std::norm(detail::dot(ch.h2, ch.h1));
  return (a - c / (sigma2 + b)) / sigma2;
}

/// ||P_perp(h2) h1||^2 / s2, i.e. 1/(s2 [(H^H H)^{-1}]_{11}).
inline double zf_snr(const ChannelRealization& ch, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("zf_snr: sigma2 must be > 0");
  const double b = detail::norm2(ch.h2);
  if (!(b > 0.0)) throw DegeneracyError("zf_snr: interferer channel is identically zero");
  const double a = detail::norm2(ch.h1);
  const double c = std::norm(detail::dot(ch.h2, ch.h1));
  return std::max(a - c / b, 0.0) / sigma2;
}

// ---- reductions ------------------------------------------------------------

/// Pairwise (cascade) summation; the split points depend only on the length.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 64) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t h = x.size() / 2;
  return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

// ---- runs ------------------------------------------------------------------

struct McRun {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  Receiver receiver = Receiver::mmse;
  std::vector<double> samples;
  /// Realizations redrawn because h1 was parallel to h2 (or h2 vanished).
  std::size_t anomalies = 0;

  double mean() const {
    if (samples.empty()) throw ArgumentError("McRun: no samples");
    return pairwise_sum(samples) / static_cast<double>(samples.size());
  }
  double standard_error() const {
    const double m = mean();
    std::vector<double> d(samples.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (samples[i] - m) * (samples[i] - m);
    return std::sqrt(pairwise_sum(d) / static_cast<double>(d.size() - (d.size() > 1))) /
           std::sqrt(static_cast<double>(d.size()));
  }
};

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(lo, hi) over [0, n) split into contiguous chunks, one per worker.
template <class Body>
void parallel_chunks(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

/// Per-realization output SINR (MMSE) or SNR (ZF). Degenerate draws, which
/// have probability zero, are redrawn on the next attempt counter and counted.
inline McRun run_mc(const PowerProfile& p, double sigma2, Receiver receiver, std::size_t n_samples,
                    std::uint64_t seed, unsigned workers = 1) {
  if (n_samples < 1) throw ArgumentError("run_mc: n_samples must be >= 1");
  if (!(sigma2 > 0.0)) throw ArgumentError("run_mc: sigma2 must be > 0");
  McRun run{seed, n_samples, receiver, std::vector<double>(n_samples), 0};
  const GaussianStream rng(seed);
  std::vector<std::uint8_t> redrawn(n_samples, 0);
  parallel_chunks(n_samples, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      for (std::uint32_t attempt = 0;; ++attempt) {
        const auto ch = sample_channel(p, rng, r, attempt);
        const double b = detail::norm2(ch.h2);
        const double a = detail::norm2(ch.h1);
        const double v = b > 0.0 ? (receiver == Receiver::mmse ? mmse_sinr(ch, sigma2) : zf_snr(ch, sigma2)) : 0.0;
        if (b > 0.0 && v > 1e-14 * a / sigma2) {
          run.samples[r] = v;
          break;
        }
        redrawn[r] = 1;
      }
    }
  });
  for (auto f : redrawn) run.anomalies += f;
  return run;
}

// ---- empirical distribution -----------------------------------------------

/// DKW: P(sup|F_N - F| > e) <= 2 exp(-2 N e^2) = delta.
inline double dkw_halfwidth(std::size_t n, double delta = 0.01) {
  if (n == 0) throw ArgumentError("dkw_halfwidth: n must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("dkw_halfwidth: delta must lie in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

struct EmpiricalCdf {
  DistributionCurve curve;
  double dkw_halfwidth = 0.0;
  double delta = 0.01;
};

inline std::vector<double> sorted_samples(const McRun& run) {
  std::vector<double> s = run.samples;
  std::sort(s.begin(), s.end());
  return s;
}

/// Step-function CDF of the samples at each grid point, with the DKW band.
inline EmpiricalCdf empirical_cdf(const McRun& run, std::span<const double> grid, double delta = 0.01) {
  if (run.samples.empty()) throw ArgumentError("empirical_cdf: empty run");
  for (std::size_t j = 1; j < grid.size(); ++j)
    if (!(grid[j] > grid[j - 1])) throw ArgumentError("empirical_cdf: grid must be strictly increasing");
  const auto s = sorted_samples(run);
  EmpiricalCdf out;
  out.delta = delta;
  out.dkw_halfwidth = dkw_halfwidth(s.size(), delta);
  out.curve.points.reserve(grid.size());
  const double n = static_cast<double>(s.size());
  for (double z : grid) {
    const auto k = std::upper_bound(s.begin(), s.end(), z) - s.begin();
    out.curve.points.push_back({z, static_cast<double>(k) / n});
  }
  return out;
}

/// Grid of `count` empirical quantiles at levels (j + 1/2)/count.
inline std::vector<double> quantile_grid(const McRun& run, std::size_t count) {
  if (run.samples.empty() || count < 2) throw ArgumentError("quantile_grid: need samples and count >= 2");
  const auto s = sorted_samples(run);
  std::vector<double> g;
  for (std::size_t j = 0; j < count; ++j) {
    const double q = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
    const auto idx = std::min(s.size() - 1, static_cast<std::size_t>(q * static_cast<double>(s.size())));
    if (g.empty() || s[idx] > g.back()) g.push_back(s[idx]);
  }
  return g;
}

/// sup over the grid of |F_emp - F|, F any callable z -> probability.
template <class Cdf>
double ks_distance_on_grid(const EmpiricalCdf& emp, Cdf&& cdf) {
  double d = 0.0;
  for (const auto& [z, f] : emp.curve.points) d = std::max(d, std::abs(f - cdf(z)));
  return d;
}

/// Exact two-sided Kolmogorov statistic against a continuous F.
template <class Cdf>
double ks_distance_exact(std::span<const double> sorted, Cdf&& cdf) {
  if (sorted.empty()) throw ArgumentError("ks_distance_exact: empty sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace macrodiv
