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
#include "dpq/privacy_audit.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dpq/special_mechanisms.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomLayout;
using testing::RandomMechanism;
using testing::RandomMonotoneMechanism;

TEST(PrivacyAuditTest, CandidateSetsMatchDenseGridForMonotoneMechanisms) {
  Rng rng = MakeSubstream(51, 0);
  for (int n = 0; n < 50; ++n) {
    const int m = 3 + n % 6;
    const Mechanism mech = RandomMonotoneMechanism(rng, RandomLayout(rng, m));
    ASSERT_TRUE(MonotonicityHolds(mech));
    const AuditReport fast = EmpiricalEpsilon(mech);
    const AuditReport dense = DenseGridAuditSerial(mech, 1e-3);
    EXPECT_EQ(fast.method, AuditMethod::kCandidateSets);
    EXPECT_NEAR(fast.eps_emp, dense.eps_emp, 1e-12) << "mechanism " << n;
  }
}

TEST(PrivacyAuditTest, CandidateWitnessesEvaluateToReportedValues) {
  Rng rng = MakeSubstream(52, 0);
  const Mechanism mech = RandomMonotoneMechanism(rng, RandomLayout(rng, 6));
  const AuditReport report = EmpiricalEpsilon(mech);
  ASSERT_EQ(report.bins.size(), 6u);
  for (const BinExtrema& b : report.bins) {
    EXPECT_DOUBLE_EQ(EvaluateWitness(mech, b.max, b.bin), b.max.probability);
    EXPECT_DOUBLE_EQ(EvaluateWitness(mech, b.min, b.bin), b.min.probability);
    EXPECT_GE(b.max.probability, b.min.probability);
  }
}

// For ERM with m = 8 the largest p(x, 3) is either p(B_3, 3) = q_3(3) or the
// left limit at B_3, which equals q_6(6) of the right family.
TEST(PrivacyAuditTest, ErmMaximumOfThirdBin) {
  for (double gamma : {0.1, 1.0, 3.0}) {
    const Mechanism mech = MakeErm({gamma, UniformBins(8, 1.0, 0.5)});
    ASSERT_TRUE(mech.layout().InDomain(3));
    const double expected =
        std::max(mech.selection().left(3, 3), mech.selection().right(6, 6));
    const AuditReport report = EmpiricalEpsilon(mech);
    EXPECT_NEAR(report.bins[2].max.probability, expected, 1e-14);
    EXPECT_NEAR(DenseGridAuditSerial(mech).bins[2].max.probability, expected, 1e-14);
  }
}

TEST(PrivacyAuditTest, SerialAndParallelDenseGridAgree) {
  Rng rng = MakeSubstream(53, 0);
  for (int n = 0; n < 10; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 3 + n % 5), true);
    const AuditReport a = DenseGridAuditSerial(mech);
    const AuditReport b = DenseGridAuditParallel(mech);
    EXPECT_EQ(a.eps_emp, b.eps_emp);
    EXPECT_EQ(a.worst_bin, b.worst_bin);
    EXPECT_EQ(AuditReportToJson(a).dump(), AuditReportToJson(b).dump());
  }
}

TEST(PrivacyAuditTest, NonMonotoneMechanismFallsBackToDenseGrid) {
  Rng rng = MakeSubstream(54, 0);
  int seen = 0;
  for (int n = 0; n < 50 && seen < 5; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 6), true);
    if (MonotonicityHolds(mech)) continue;
    ++seen;
    const AuditReport report = EmpiricalEpsilon(mech);
    EXPECT_EQ(report.method, AuditMethod::kDenseGrid);
    EXPECT_FALSE(report.monotonicity_assumption_held);
  }
  EXPECT_GT(seen, 0);
}

TEST(PrivacyAuditTest, BreakpointScreenIsExactForPiecewiseLinearLaws) {
  Rng rng = MakeSubstream(55, 0);
  for (int n = 0; n < 30; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 3 + n % 6), n % 2);
    EXPECT_NEAR(BreakpointEpsilon(mech), DenseGridAuditSerial(mech, 1e-3).eps_emp,
                1e-12);
  }
}

TEST(PrivacyAuditTest, ZeroProbabilityGivesInfiniteEpsilon) {
  // Plain stochastic rounding never outputs a far bin.
  TriangularTable table(3);
  table.at(1, 1) = 1.0;
  table.at(2, 2) = 1.0;
  table.at(3, 3) = 1.0;
  const Mechanism mech(UniformBins(4, 1.0, 0.5), SelectionDistribution::Symmetric(table));
  const AuditReport report = EmpiricalEpsilon(mech);
  EXPECT_TRUE(std::isinf(report.eps_emp));
  EXPECT_EQ(AuditReportToJson(report)["eps_emp"], "inf");
  EXPECT_FALSE(VerifyMechanism(mech, 100.0).passed);
}

TEST(PrivacyAuditTest, VerifyUsesSlack) {
  const Mechanism mech = MakeRqm({0.22, UniformBins(4, 1.0, 1.7)});
  const double eps = EmpiricalEpsilon(mech).eps_emp;
  EXPECT_LT(eps, 1.0);
  EXPECT_TRUE(VerifyMechanism(mech, eps).passed);
  EXPECT_TRUE(VerifyMechanism(mech, eps - 0.5 * kAuditSlack).passed);
  EXPECT_FALSE(VerifyMechanism(mech, eps - 2 * kAuditSlack).passed);
}

TEST(PrivacyAuditTest, JsonListsEveryBin) {
  const Mechanism mech = MakeErm({1.0, UniformBins(5, 1.0, 1.0)});
  const nlohmann::json j = AuditReportToJson(EmpiricalEpsilon(mech));
  EXPECT_EQ(j["bins"].size(), 5u);
  EXPECT_EQ(j["method"], "candidate_sets");
  EXPECT_TRUE(j["eps_emp"].is_number());
  EXPECT_FALSE(FormatAuditReport(EmpiricalEpsilon(mech)).empty());
}

}  // namespace
}  // namespace dpq
