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
#include "dpq/mechanism.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dpq/errors.h"
#include "dpq/special_mechanisms.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomLayout;
using testing::RandomMechanism;
using testing::UniformIn;

TEST(MechanismTest, OutputDistributionIsUnbiasedForRandomMechanisms) {
  Rng rng = MakeSubstream(11, 0);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const int m = 3 + n % 6;
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, m), n % 2 == 1);
    for (int k = 0; k < 100; ++k) {
      const double x = UniformIn(rng, -1.0, 1.0);
      const std::vector<double> p = OutputDistribution(mech, x);
      double mean = 0.0;
      double total = 0.0;
      for (int i = 1; i <= m; ++i) {
        EXPECT_GE(p[i - 1], -1e-15);
        mean += p[i - 1] * mech.layout().bin(i);
        total += p[i - 1];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      worst = std::max(worst, std::abs(mean - x));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(MechanismTest, EdgesAreUnbiased) {
  Rng rng = MakeSubstream(12, 0);
  for (int n = 0; n < 20; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 5), true);
    for (double x : {-1.0, 1.0}) {
      const std::vector<double> p = OutputDistribution(mech, x);
      double mean = 0.0;
      for (int i = 1; i <= 5; ++i) mean += p[i - 1] * mech.layout().bin(i);
      EXPECT_NEAR(mean, x, 1e-10);
    }
  }
}

TEST(MechanismTest, SampleMeanMatchesInput) {
  const Mechanism mech = MakeRqm({0.22, UniformBins(4, 1.0, 1.7)});
  Rng rng = MakeSubstream(13, 0);
  constexpr int kDraws = 1000000;
  for (double x : {-0.9, -0.2, 0.35, 1.0}) {
    double sum = 0.0;
    double sq = 0.0;
    for (int k = 0; k < kDraws; ++k) {
      const double y = Sample(mech, x, rng);
      sum += y;
      sq += y * y;
    }
    const double mean = sum / kDraws;
    const double se = std::sqrt((sq / kDraws - mean * mean) / kDraws);
    EXPECT_LE(std::abs(mean - x), 4 * se) << "x=" << x;
  }
}

TEST(MechanismTest, SampleFrequenciesMatchOutputDistribution) {
  Rng build = MakeSubstream(14, 0);
  const Mechanism mech = RandomMechanism(build, RandomLayout(build, 5), true);
  constexpr int kDraws = 400000;
  const double x = 0.3;
  const std::vector<double> p = OutputDistribution(mech, x);
  std::vector<int> counts(5, 0);
  Rng rng = MakeSubstream(14, 1);
  for (int k = 0; k < kDraws; ++k) {
    const double y = Sample(mech, x, rng);
    for (int i = 1; i <= 5; ++i) {
      if (y == mech.layout().bin(i)) ++counts[i - 1];
    }
  }
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), 0), kDraws);
  for (int i = 0; i < 5; ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / kDraws);
    EXPECT_NEAR(counts[i] / static_cast<double>(kDraws), p[i], 4 * se + 1e-9);
  }
}

TEST(MechanismTest, LimitsMatchNearbyValues) {
  Rng rng = MakeSubstream(15, 0);
  const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 6), true);
  const BinLayout& layout = mech.layout();
  for (int k = 1; k <= layout.m(); ++k) {
    const double b = layout.bin(k);
    if (b <= -1.0 || b > 1.0) continue;
    const std::vector<double> left = OutputDistributionLimit(mech, k, LimitSide::kFromLeft);
    const std::vector<double> near = OutputDistribution(mech, b - 1e-9);
    for (int i = 0; i < layout.m(); ++i) EXPECT_NEAR(left[i], near[i], 1e-6);
    if (b < 1.0) {
      const std::vector<double> right =
          OutputDistributionLimit(mech, k, LimitSide::kFromRight);
      const std::vector<double> at = OutputDistribution(mech, b);
      for (int i = 0; i < layout.m(); ++i) EXPECT_DOUBLE_EQ(right[i], at[i]);
    }
  }
}

TEST(MechanismTest, PieceAgreesWithOutputDistributionInsideInterval) {
  Rng rng = MakeSubstream(16, 0);
  const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 5), false);
  for (int j : mech.layout().ReachableIntervals()) {
    const double x = 0.5 * (mech.layout().ClippedLow(j) + mech.layout().ClippedHigh(j));
    const std::vector<double> p = OutputDistribution(mech, x);
    for (int i = 1; i <= 5; ++i) {
      EXPECT_NEAR(PieceProbability(mech, j, x, i), p[i - 1], 1e-14);
    }
  }
}

TEST(MechanismTest, DitherIsUnbiasedAndRejectsBadInput) {
  Rng rng = MakeSubstream(17, 0);
  double sum = 0.0;
  constexpr int kDraws = 200000;
  for (int k = 0; k < kDraws; ++k) sum += Dither(-1.0, 2.0, 0.5, rng);
  EXPECT_NEAR(sum / kDraws, 0.5, 4 * 1.5 / std::sqrt(kDraws));
  EXPECT_THROW(Dither(0.0, 1.0, 2.0, rng), std::exception);
}

TEST(MechanismTest, SampleRejectsOutOfDomain) {
  const Mechanism mech = MakeRqm({0.3, UniformBins(4, 1.0, 1.0)});
  Rng rng = MakeSubstream(18, 0);
  EXPECT_THROW(Sample(mech, 1.5, rng), DomainError);
}

}  // namespace
}  // namespace dpq
