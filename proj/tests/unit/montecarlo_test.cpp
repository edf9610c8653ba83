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


#include "macrodiv/montecarlo.hpp"
#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace macrodiv;

TEST(Philox, KnownAnswerVectors) {
  using B = Philox4x32::Block;
  EXPECT_EQ(Philox4x32(0)(B{0, 0, 0, 0}), (B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32(~0ull)(B{~0u, ~0u, ~0u, ~0u}), (B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32(0x299f31d0a4093822ull)(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}),
            (B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Gaussian, CircularUnitVariance) {
  const GaussianStream g(4);
  const int n = 1'000'000;
  double m2 = 0, re = 0, pseudo = 0;
  for (int r = 0; r < n; ++r) {
    const auto x = g.normal(r, 0);
    m2 += std::norm(x);
    re += x.real();
    pseudo += (x * x).real();
  }
  EXPECT_NEAR(m2 / n, 1.0, 5e-3);
  EXPECT_NEAR(re / n, 0.0, 5e-3);
  EXPECT_NEAR(pseudo / n, 0.0, 5e-3);
}

TEST(Channel, SecondMomentsMatchPowers) {
  const PowerProfile p({2.0, 0.5, 0.1}, {0.3, 1.0, 4.0});
  const GaussianStream g(8);
  const int n = 1'000'000;
  std::vector<double> s1(3), s2(3);
  for (int r = 0; r < n; ++r) {
    const auto ch = sample_channel(p, g, r);
    for (int i = 0; i < 3; ++i) {
      s1[i] += std::norm(ch.h1[i]);
      s2[i] += std::norm(ch.h2[i]);
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(s1[i] / n / p.p1(i), 1.0, 0.01);
    EXPECT_NEAR(s2[i] / n / p.p2(i), 1.0, 0.01);
  }
}

TEST(Receivers, MatchDenseLinearAlgebra) {
  const PowerProfile p({2.0, 0.5, 0.1}, {0.3, 1.0, 4.0});
  const GaussianStream g(9);
  for (int r = 0; r < 2000; ++r) {
    const auto ch = sample_channel(p, g, r);
    for (double s2 : {1e-3, 0.3, 10.0}) {
      const double m = mmse_sinr(ch, s2), z = zf_snr(ch, s2);
      const double mr = oracle::dense_mmse_sinr(ch.h1, ch.h2, s2);
      const double zr = oracle::dense_zf_snr(ch.h1, ch.h2, s2);
      EXPECT_LE(std::abs(m - mr), 1e-12 * mr);
      EXPECT_LE(std::abs(z - zr), 1e-10 * zr);
      EXPECT_GE(m, z * (1 - 1e-12));
    }
  }
}

TEST(Receivers, RejectBadInputs) {
  ChannelRealization ch{{1.0, 2.0}, {0.0, 0.0}};
  EXPECT_THROW(zf_snr(ch, 1.0), DegeneracyError);
  EXPECT_THROW(mmse_sinr(ch, 0.0), ArgumentError);
}

TEST(RunMc, ZfMeanForIdentityProfiles) {
  const PowerProfile p({1, 1}, {1, 1});
  const auto run = run_mc(p, 1.0, Receiver::zf, 1'000'000, 3);
  EXPECT_LT(std::abs(run.mean() - 1.0), 3.0 * run.standard_error());
  EXPECT_EQ(run.anomalies, 0u);
}

TEST(RunMc, IndependentOfWorkerCount) {
  const PowerProfile p({2.0, 0.5, 0.1}, {0.3, 1.0, 4.0});
  const auto a = run_mc(p, 0.2, Receiver::mmse, 100'003, 42, 1);
  const auto b = run_mc(p, 0.2, Receiver::mmse, 100'003, 42, 4);
  const auto c = run_mc(p, 0.2, Receiver::mmse, 100'003, 42, 7);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.samples, c.samples);
  EXPECT_EQ(a.mean(), c.mean());
  const auto d = run_mc(p, 0.2, Receiver::mmse, 100'003, 43, 1);
  EXPECT_NE(a.samples, d.samples);
}

TEST(RunMc, SameSeedSameChannelsAcrossReceivers) {
  const PowerProfile p({2.0, 0.5, 0.1}, {0.3, 1.0, 4.0});
  const auto m = run_mc(p, 0.2, Receiver::mmse, 50'000, 6);
  const auto z = run_mc(p, 0.2, Receiver::zf, 50'000, 6);
  for (std::size_t j = 0; j < m.samples.size(); ++j) ASSERT_GE(m.samples[j], z.samples[j] * (1 - 1e-12));
}

TEST(Dkw, Halfwidth) {
  EXPECT_NEAR(dkw_halfwidth(1'000'000, 0.01), 0.0016276, 1e-6);
  EXPECT_GT(dkw_halfwidth(1000), dkw_halfwidth(1'000'000));
  EXPECT_THROW(dkw_halfwidth(0), ArgumentError);
  EXPECT_THROW(dkw_halfwidth(10, 1.5), ArgumentError);
}

TEST(EmpiricalCdf, StepValuesAndChecks) {
  McRun run;
  run.samples = {3.0, 1.0, 2.0, 2.0};
  const double grid[] = {0.5, 1.0, 2.0, 2.5, 10.0};
  const auto e = empirical_cdf(run, grid);
  const double want[] = {0.0, 0.25, 0.75, 0.75, 1.0};
  for (int j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(e.curve.points[j].second, want[j]);
  const double bad[] = {1.0, 1.0};
  EXPECT_THROW(empirical_cdf(run, bad), ArgumentError);
  EXPECT_THROW(empirical_cdf(McRun{}, grid), ArgumentError);
}

TEST(EmpiricalCdf, KolmogorovDistanceOfExponentialSample) {
  // ||P_perp h1||^2 for P1 = I2 is Exp(1).
  const auto run = run_mc(PowerProfile({1, 1}, {1, 1}), 1.0, Receiver::zf, 200'000, 12);
  const auto s = sorted_samples(run);
  const double d = ks_distance_exact(s, [](double z) { return 1.0 - std::exp(-z); });
  EXPECT_LT(d, 1.63 / std::sqrt(200'000.0));  // 1% Kolmogorov quantile
  const auto emp = empirical_cdf(run, quantile_grid(run, 200));
  EXPECT_LE(ks_distance_on_grid(emp, [](double z) { return 1.0 - std::exp(-z); }), d);
}

TEST(PairwiseSum, ExactOnRepresentableData) {
  std::vector<double> v(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.0, 1e-12);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}
