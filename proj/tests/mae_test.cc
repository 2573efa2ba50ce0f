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
#include "dpq/mae.h"

#include <gtest/gtest.h>

#include <cmath>

#include "dpq/experiments.h"
#include "dpq/input_distribution.h"
#include "dpq/special_mechanisms.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomLayout;
using testing::RandomMechanism;

// Independent oracle: sum over outputs of p(x, i) |B_i - x|.
double BruteConditional(const Mechanism& mech, double x) {
  const std::vector<double> p = OutputDistribution(mech, x);
  double out = 0.0;
  for (int i = 1; i <= mech.m(); ++i) out += p[i - 1] * std::abs(mech.layout().bin(i) - x);
  return out;
}

TEST(MaeTest, ConditionalMatchesBruteForce) {
  Rng rng = MakeSubstream(21, 0);
  for (int n = 0; n < 20; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 5), n % 2 == 0);
    for (double x : {-1.0, -0.3, 0.0, 0.77, 1.0}) {
      EXPECT_NEAR(ConditionalMae(mech, x), BruteConditional(mech, x), 1e-12);
    }
  }
}

TEST(MaeTest, UniformExactMaeMatchesFineQuadrature) {
  Rng rng = MakeSubstream(22, 0);
  for (int n = 0; n < 10; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 4 + n % 3), true);
    // Midpoint rule inside each interval, where the integrand is smooth.
    constexpr int kCells = 20000;
    double oracle = 0.0;
    for (int j : mech.layout().ReachableIntervals()) {
      const double lo = mech.layout().ClippedLow(j);
      const double h = mech.layout().ClippedWidth(j) / kCells;
      for (int k = 0; k < kCells; ++k) oracle += h * BruteConditional(mech, lo + (k + 0.5) * h);
    }
    oracle /= 2.0;
    EXPECT_NEAR(ExactMae(mech, InputDistribution::Uniform()), oracle, 1e-8);
  }
}

TEST(MaeTest, GaussianExactMaeMatchesMonteCarlo) {
  const Mechanism mech = MakeRqm({0.22, UniformBins(4, 1.0, 1.7)});
  const InputDistribution dist = InputDistribution::TruncatedGaussian(0.5, 0.2);
  const MeanEstimate mc = MonteCarloMaeSerial(mech, dist, 400000, 5);
  EXPECT_NEAR(ExactMae(mech, dist), mc.mean, 4 * mc.std_error);
}

TEST(MaeTest, UpperBoundDominatesExactMae) {
  Rng rng = MakeSubstream(23, 0);
  for (int n = 0; n < 50; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 3 + n % 5), n % 2 == 0);
    for (const InputDistribution& d :
         {InputDistribution::Uniform(), InputDistribution::TruncatedGaussian(0.3, 0.4)}) {
      EXPECT_GE(MaeUpperBound(mech, d) + 1e-12, ExactMae(mech, d));
    }
  }
}

TEST(MaeTest, PublishedSpecialCaseValues) {
  const InputDistribution u = InputDistribution::Uniform();
  const double erm1 = ExactMae(
      MakeErm({0.026, BinLayout::FromBins(1.0, {-5.1, -0.1, 0.1, 5.1})}), u);
  const double rqm1 = ExactMae(MakeRqm({0.22, UniformBins(4, 1.0, 1.7)}), u);
  const double rqm15 = ExactMae(MakeRqm({0.498, UniformBins(4, 1.0, 1.6)}), u);
  const double erm15 = ExactMae(
      MakeErm({0.043, BinLayout::FromBins(1.0, {-2.7, -0.4, 0.4, 2.7})}), u);
  EXPECT_NEAR(erm1, 2.216, 0.03 * 2.216);
  EXPECT_NEAR(rqm1, 1.993, 0.03 * 1.993);
  EXPECT_NEAR(rqm15, 1.310, 0.03 * 1.310);
  EXPECT_NEAR(erm15, 1.304, 0.03 * 1.304);
}

TEST(MaeTest, IntervalMassesReproduceUniform) {
  Rng rng = MakeSubstream(24, 0);
  const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 5), false);
  const BinLayout& layout = mech.layout();
  std::vector<double> masses;
  for (int j = 1; j < layout.m(); ++j) {
    masses.push_back(layout.IntervalReachable(j) ? layout.ClippedWidth(j) / 2.0 : 0.0);
  }
  const InputDistribution d = InputDistribution::IntervalMasses(layout, masses);
  EXPECT_NEAR(ExactMae(mech, d), ExactMae(mech, InputDistribution::Uniform()), 1e-12);
}

TEST(MaeTest, EstimatedMassesSumToOne) {
  const BinLayout layout(1.0, 2.0, {-3.0, -0.5, 0.5, 3.0});
  Rng rng = MakeSubstream(25, 0);
  const std::vector<double> samples = SampleTruncatedGaussian(0.5, 0.3, 1.0, 5000, rng);
  for (double x : samples) {
    EXPECT_GE(x, -1.0);
    EXPECT_LE(x, 1.0);
  }
  const std::vector<double> masses = EstimateIntervalMasses(layout, samples);
  double total = 0.0;
  for (double v : masses) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace dpq
