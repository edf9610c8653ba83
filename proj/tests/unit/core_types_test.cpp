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


#include "macrodiv/core_types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace macrodiv;

TEST(DbToLinear, FiveDecibels) { EXPECT_NEAR(db_to_linear(5.0), 3.1622776601683795, 1e-15); }

TEST(DbToLinear, RoundTrip) {
  for (double x : {-30.0, -3.0, 0.0, 7.5, 40.0}) EXPECT_NEAR(linear_to_db(db_to_linear(x)), x, 1e-12);
}

TEST(Mpsk, EightPsk) {
  const auto m = mpsk_params(8);
  EXPECT_NEAR(m.g, 0.14644660940672624, 1e-15);
  EXPECT_NEAR(m.t_max, 7.0 * std::numbers::pi / 8.0, 1e-15);
}

TEST(Mpsk, BpskAndQpsk) {
  EXPECT_EQ(mpsk_params(2).g, 1.0);
  EXPECT_NEAR(mpsk_params(2).t_max, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(mpsk_params(4).g, 0.5, 1e-15);
}

TEST(Mpsk, RejectsOrderBelowTwo) {
  EXPECT_THROW(mpsk_params(1), InvalidModulation);
  EXPECT_THROW(mpsk_params(0), InvalidModulation);
}

TEST(PowerProfile, RejectsBadShapes) {
  EXPECT_THROW(PowerProfile({1.0}, {1.0}), ArgumentError);
  EXPECT_THROW(PowerProfile({1.0, 2.0}, {1.0}), ArgumentError);
  EXPECT_THROW(PowerProfile({1.0, 0.0}, {1.0, 1.0}), ArgumentError);
  EXPECT_THROW(PowerProfile({1.0, NAN}, {1.0, 1.0}), ArgumentError);
  EXPECT_THROW(PowerProfile({1.0, 2.0}, {-1.0, 1.0}), ArgumentError);
}

TEST(PowerProfile, PermutationReordersBothColumns) {
  const PowerProfile p({1, 2, 3}, {4, 5, 6});
  const std::size_t perm[] = {2, 0, 1};
  const auto q = p.permuted(perm);
  EXPECT_EQ(q.p1(0), 3);
  EXPECT_EQ(q.p2(0), 6);
  EXPECT_EQ(q.p1(1), 1);
  EXPECT_DOUBLE_EQ(q.trace_p1(), p.trace_p1());
}

TEST(ValidateProfile, ProportionalColumnsAreDegenerate) {
  const auto rep = validate_profile(PowerProfile({1, 2}, {2, 4}), 1e-6);
  ASSERT_TRUE(rep.degenerate());
  bool cross = false;
  for (const auto& p : rep.pairs) cross = cross || (p.kind == DegeneracyKind::cross_product && p.i == 0 && p.k == 1);
  EXPECT_TRUE(cross);
  EXPECT_NE(rep.describe().find("(1,2)"), std::string::npos);
}

TEST(ValidateProfile, EqualPowersFlagged) {
  const auto rep = validate_profile(PowerProfile({1, 1, 2}, {3, 1, 2}));
  ASSERT_TRUE(rep.degenerate());
  EXPECT_EQ(rep.pairs.front().kind, DegeneracyKind::desired_power);
  EXPECT_EQ(rep.pairs.front().i, 0u);
  EXPECT_EQ(rep.pairs.front().k, 1u);
}

TEST(ValidateProfile, GenericProfileIsClean) {
  EXPECT_FALSE(validate_profile(PowerProfile({1, 2, 4}, {4, 2.5, 1})).degenerate());
}

TEST(ValidateProfile, ThresholdIsRelative) {
  const PowerProfile p({1.0, 1.0 + 1e-4, 3.0}, {0.7, 2.0, 1.3});
  EXPECT_FALSE(validate_profile(p, 1e-6).degenerate());
  EXPECT_TRUE(validate_profile(p, 1e-3).degenerate());
}

TEST(Receiver, ParseAndPrint) {
  EXPECT_EQ(parse_receiver("zf"), Receiver::zf);
  EXPECT_EQ(parse_receiver("MMSE"), Receiver::mmse);
  EXPECT_EQ(to_string(Receiver::zf), "zf");
  EXPECT_THROW(parse_receiver("ml"), ArgumentError);
}

TEST(DistributionCurve, WellFormed) {
  DistributionCurve c{{{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}}};
  EXPECT_TRUE(c.well_formed());
  c.points[1].second = 1.2;
  EXPECT_FALSE(c.well_formed());
}
