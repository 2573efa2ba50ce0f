//
// Copyright 2026 The dpquant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include "dpq/bin_layout.h"

#include <gtest/gtest.h>

#include "dpq/errors.h"
#include "dpq/selection_distribution.h"
#include "dpq/special_mechanisms.h"

namespace dpq {
namespace {

TEST(BinLayoutTest, RejectsBadBins) {
  EXPECT_THROW(BinLayout(1.0, 1.0, {-2.0, 0.5, 0.0, 2.0}), DomainError);
  EXPECT_THROW(BinLayout(1.0, 1.0, {-2.0, 0.0, 3.0}), DomainError);
  EXPECT_THROW(BinLayout(1.0, -0.5, {-0.5, 0.5}), DomainError);
  EXPECT_THROW(BinLayout(0.0, 1.0, {-1.0, 1.0}), DomainError);
}

TEST(BinLayoutTest, DomainBinsAndIntervals) {
  const BinLayout layout(1.0, 2.0, {-3.0, -0.5, 0.5, 3.0});
  EXPECT_EQ(layout.m(), 4);
  EXPECT_EQ(layout.s(), 2);
  EXPECT_EQ(layout.t(), 3);
  EXPECT_TRUE(layout.symmetric());
  EXPECT_FALSE(layout.InDomain(1));
  EXPECT_TRUE(layout.InDomain(2));
  EXPECT_EQ(layout.IntervalIndex(-1.0), 1);
  EXPECT_EQ(layout.IntervalIndex(-0.5), 2);
  EXPECT_EQ(layout.IntervalIndex(0.49), 2);
  EXPECT_EQ(layout.IntervalIndex(1.0), 3);
  EXPECT_THROW(layout.IntervalIndex(1.5), DomainError);
  EXPECT_DOUBLE_EQ(layout.ClippedLow(1), -1.0);
  EXPECT_DOUBLE_EQ(layout.ClippedHigh(3), 1.0);
  EXPECT_DOUBLE_EQ(layout.ClippedWidth(2), 1.0);
}

TEST(BinLayoutTest, EdgeAtCFoldsIntoLastInterval) {
  const BinLayout layout(1.0, 0.0, {-1.0, 0.0, 1.0});
  EXPECT_EQ(layout.IntervalIndex(1.0), 2);
  EXPECT_EQ(layout.ReachableIntervals(), (std::vector<int>{1, 2}));
}

TEST(BinLayoutTest, UnreachableIntervalWhenNoInteriorBins) {
  const BinLayout layout(1.0, 2.0, {-3.0, -2.0, 2.0, 3.0});
  EXPECT_FALSE(layout.HasInteriorBins());
  EXPECT_FALSE(layout.IntervalReachable(1));
  EXPECT_TRUE(layout.IntervalReachable(2));
  EXPECT_FALSE(layout.IntervalReachable(3));
}

TEST(BinLayoutTest, FromBinsInfersDelta) {
  const BinLayout layout = BinLayout::FromBins(1.0, {-2.7, -0.9, 0.9, 2.7});
  EXPECT_NEAR(layout.delta(), 1.7, 1e-12);
  EXPECT_TRUE(layout == UniformBins(4, 1.0, 1.7));
}

TEST(TriangularTableTest, OffsetsArePacked) {
  TriangularTable t(4);
  EXPECT_EQ(t.size(), 10);
  EXPECT_EQ(TriangularTable::Offset(1, 1), 0);
  EXPECT_EQ(TriangularTable::Offset(3, 2), 4);
  EXPECT_EQ(TriangularTable::Offset(4, 4), 9);
}

TEST(SelectionDistributionTest, ValidatesRows) {
  TriangularTable t(2);
  t.at(1, 1) = 1.0;
  t.at(2, 1) = 0.7;
  t.at(2, 2) = 0.2;
  EXPECT_THROW(SelectionDistribution::Symmetric(t), DomainError);
  t.at(2, 2) = 0.3;
  const SelectionDistribution sel = SelectionDistribution::Symmetric(t);
  EXPECT_EQ(sel.m(), 3);
  // Right law for j = 1 uses row m - j = 2, entry m + 1 - r.
  EXPECT_DOUBLE_EQ(sel.RightProb(1, 3), 0.7);
  EXPECT_DOUBLE_EQ(sel.RightProb(1, 2), 0.3);
  t.at(1, 1) = 0.9;
  EXPECT_THROW(SelectionDistribution::Symmetric(t), DomainError);
}

}  // namespace
}  // namespace dpq
