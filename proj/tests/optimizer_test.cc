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
#include "dpq/optimizer.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dpq/errors.h"
#include "dpq/mae.h"
#include "dpq/privacy_audit.h"
#include "dpq/special_mechanisms.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomTable;

InnerProblem UniformProblem(const BinLayout& layout, double eps, LpMode mode) {
  return {layout, eps, InputDistribution::Uniform(), InputDistribution::Uniform(),
          ConstraintFamily::kFull, mode, {}};
}

TEST(OptimizerTest, SerialAndParallelEvaluationAgree) {
  Rng rng = MakeSubstream(61, 0);
  const BinLayout layout = UniformBins(5, 1.0, 1.5);
  std::vector<GridPoint> points;
  for (int k = 0; k < 24; ++k) {
    points.push_back({ProbBounds::Band(RandomTable(rng, 5), RandomTable(rng, 5), 0.3),
                      "random " + std::to_string(k)});
  }
  points.push_back({ProbBounds::Band(RqmSelection(5, 0.3).left_table(),
                                     RqmSelection(5, 0.3).left_table(), 0.05),
                    "rqm"});
  for (const LpMode mode : {LpMode::kSymmetric, LpMode::kGeneral}) {
    const InnerProblem problem = UniformProblem(layout, 1.5, mode);
    const std::vector<PointOutcome> a = EvaluateBoundsSerial(problem, points);
    const std::vector<PointOutcome> b = EvaluateBoundsParallel(problem, points);
    ASSERT_EQ(a.size(), b.size());
    for (size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].entry.status, b[k].entry.status);
      EXPECT_EQ(a[k].entry.feasible, b[k].entry.feasible);
      EXPECT_EQ(a[k].entry.objective, b[k].entry.objective);
      EXPECT_EQ(a[k].entry.exact_mae, b[k].entry.exact_mae);
      EXPECT_EQ(a[k].entry.audit_eps, b[k].entry.audit_eps);
    }
  }
}

TEST(OptimizerTest, InnerWinnerIsPrivateAndBeatsRqmOnSameBins) {
  const BinLayout layout = UniformBins(4, 1.0, 1.7);
  const double eps = 1.0;
  const OptmResult r = OptmInner(layout, eps, BoundGrid::PatternSearch(),
                                 InputDistribution::Uniform(), ConstraintFamily::kFull,
                                 LpMode::kSymmetric);
  ASSERT_EQ(r.status, OptmStatus::kOk);
  ASSERT_TRUE(r.mechanism.has_value());
  EXPECT_LE(EmpiricalEpsilon(*r.mechanism).eps_emp, eps + kAuditSlack);
  EXPECT_DOUBLE_EQ(ExactMae(*r.mechanism, InputDistribution::Uniform()), r.exact_mae);
  EXPECT_LE(r.exact_mae, r.mae_bound + 1e-9);

  const FamilySearchResult rqm = SearchRqm(1.0, 4, eps, {1.7}, DefaultRqmQOptions(),
                                           InputDistribution::Uniform());
  ASSERT_EQ(rqm.status, OptmStatus::kOk);
  EXPECT_LE(r.exact_mae, rqm.exact_mae + 1e-12);
}

TEST(OptimizerTest, WinnerIsBestFeasibleLeaderboardEntry) {
  const OptmResult r = OptmInner(UniformBins(4, 1.0, 2.0), 1.5,
                                 BoundGrid::PatternSearch(), InputDistribution::Uniform(),
                                 ConstraintFamily::kFull, LpMode::kGeneral);
  ASSERT_EQ(r.status, OptmStatus::kOk);
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < r.leaderboard.size(); ++k) {
    const LeaderboardEntry& e = r.leaderboard[k];
    EXPECT_EQ(e.index, static_cast<int>(k));
    if (!e.feasible || e.audit_eps > 1.5 + kAuditSlack) continue;
    EXPECT_LE(e.exact_mae, e.mae_bound + 1e-9);
    best = std::min(best, e.exact_mae);
  }
  EXPECT_EQ(r.leaderboard[r.winner_index].exact_mae, best);
  EXPECT_EQ(r.exact_mae, best);
}

TEST(OptimizerTest, NoFeasiblePointIsReported) {
  // Bounds that force q_2(1) >= 0.9 cannot satisfy row monotonicity.
  TriangularTable lo(3, 0.9);
  TriangularTable hi(3, 1.0);
  const OptmResult r = OptmInner(
      UniformBins(4, 1.0, 1.0), 1.0, BoundGrid::Explicit({ProbBounds(lo, hi)}),
      InputDistribution::Uniform(), ConstraintFamily::kFull, LpMode::kSymmetric);
  EXPECT_EQ(r.status, OptmStatus::kNoFeasible);
  EXPECT_EQ(r.message, kNoFeasibleMessage);
  EXPECT_FALSE(r.mechanism.has_value());
  EXPECT_EQ(r.winner_index, -1);
  EXPECT_EQ(r.infeasible_points, 1);
}

// With four symmetric bins and two of them inside [-c, c], the ratio row
// between q_2(1) and q_1(1) forces q_2(1) > 1/2 while row monotonicity needs
// q_2(1) <= q_2(2). The reduced family has no feasible point.
TEST(OptimizerTest, ReducedFamilyIsInfeasibleForFourSymmetricBins) {
  ReducedGridOptions small;
  small.points = 6;
  const OptmResult r =
      OptmInner(UniformBins(4, 1.0, 1.0), 1.0, BoundGrid::ReducedScalars(small),
                InputDistribution::Uniform(), ConstraintFamily::kReduced,
                LpMode::kSymmetric);
  EXPECT_EQ(r.status, OptmStatus::kNoFeasible);
  EXPECT_GT(r.infeasible_points, 0);
}

TEST(OptimizerTest, OuterPicksBestLayout) {
  HyperGrid hyper = DefaultHyperGrid(ConstraintFamily::kFull, LpMode::kSymmetric);
  hyper.delta_options = {1.0, 2.0};
  hyper.inner_scales = {0.5};
  const OptmResult outer = OptmOuter(1.0, 4, 1.0, hyper, InputDistribution::Uniform());
  ASSERT_EQ(outer.status, OptmStatus::kOk);
  double best = std::numeric_limits<double>::infinity();
  for (const BinLayout& layout : LayoutsFor(1.0, 4, hyper)) {
    const OptmResult inner = OptmInner(layout, 1.0, hyper.bounds,
                                       InputDistribution::Uniform(), hyper.family,
                                       hyper.mode);
    if (inner.status == OptmStatus::kOk) best = std::min(best, inner.exact_mae);
  }
  EXPECT_EQ(outer.exact_mae, best);
  EXPECT_EQ(outer.leaderboard[outer.winner_index].exact_mae, best);
}

TEST(OptimizerTest, RqmSearchMatchesBruteForce) {
  const std::vector<double> qs = {0.05, 0.1, 0.2, 0.3, 0.5};
  const FamilySearchResult r =
      SearchRqm(1.0, 4, 1.0, {1.0, 1.7, 2.5}, qs, InputDistribution::Uniform());
  double best = std::numeric_limits<double>::infinity();
  for (double delta : {1.0, 1.7, 2.5}) {
    for (double q : qs) {
      const Mechanism mech = MakeRqm({q, UniformBins(4, 1.0, delta)});
      if (EmpiricalEpsilon(mech).eps_emp > 1.0 + kAuditSlack) continue;
      best = std::min(best, ExactMae(mech, InputDistribution::Uniform()));
    }
  }
  ASSERT_EQ(r.status, OptmStatus::kOk);
  EXPECT_EQ(r.exact_mae, best);
  EXPECT_EQ(r.evaluated_points, 15);
}

TEST(OptimizerTest, LeaderboardCsvHasHeaderAndRows) {
  LeaderboardEntry feasible;
  feasible.index = 0;
  feasible.bins = {-2.0, -0.5, 0.5, 2.0};
  feasible.point = "chain 1, seed";
  feasible.status = "optimal";
  feasible.feasible = true;
  feasible.objective = 1.25;
  feasible.mae_bound = 2.0;
  feasible.exact_mae = 1.5;
  feasible.audit_eps = 0.75;
  LeaderboardEntry infeasible = feasible;
  infeasible.index = 1;
  infeasible.status = "infeasible";
  infeasible.feasible = false;
  const std::string csv = LeaderboardCsv({feasible, infeasible});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "index,bins,point,status,feasible,objective,mae_bound,exact_mae,audit_eps");
  EXPECT_NE(csv.find("\"chain 1, seed\""), std::string::npos);
  EXPECT_NE(csv.find(",1.25,2,1.5,0.75\n"), std::string::npos);
  EXPECT_NE(csv.find("infeasible,0,,,,\n"), std::string::npos);
}

TEST(OptimizerTest, RejectsBadArguments) {
  EXPECT_THROW(OptmInner(UniformBins(4, 1.0, 1.0), 0.0, BoundGrid::PatternSearch(),
                         InputDistribution::Uniform(), ConstraintFamily::kFull,
                         LpMode::kSymmetric),
               DomainError);
  EXPECT_THROW(OptmInner(BinLayout(1.0, 1.0, {-2.0, -0.3, 0.6, 2.0}), 1.0,
                         BoundGrid::PatternSearch(), InputDistribution::Uniform(),
                         ConstraintFamily::kFull, LpMode::kSymmetric),
               DomainError);
}

}  // namespace
}  // namespace dpq
