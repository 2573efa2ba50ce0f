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
#include "dpq/lp_builder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>

#include "dpq/errors.h"
#include "dpq/mae.h"
#include "dpq/mechanism.h"
#include "dpq/privacy_audit.h"
#include "dpq/simplex.h"
#include "dpq/special_mechanisms.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomLayout;
using testing::RandomMechanism;
using testing::RandomSymmetricLayout;
using testing::UniformIn;

TEST(LpBuilderTest, ValuesRoundTripThroughMechanism) {
  Rng rng = MakeSubstream(41, 0);
  for (int n = 0; n < 40; ++n) {
    const int m = 3 + n % 5;
    const bool general = n % 2 == 1;
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, m), general);
    const VariableMap vars(m, general ? LpMode::kGeneral : LpMode::kSymmetric);
    const std::vector<double> values = ValuesFromMechanism(mech, vars);
    const Mechanism back = MechanismFromValues(mech.layout(), vars, values);
    for (int r = 1; r < m; ++r) {
      for (int i = 1; i <= r; ++i) {
        EXPECT_NEAR(back.selection().left(r, i), mech.selection().left(r, i), 1e-15);
        EXPECT_NEAR(back.selection().right(r, i), mech.selection().right(r, i), 1e-15);
      }
    }
  }
}

TEST(LpBuilderTest, VariableNamesAreUnique) {
  const VariableMap vars(5, LpMode::kGeneral);
  std::set<std::string> names;
  for (int k = 0; k < vars.size(); ++k) names.insert(vars.Name(k));
  EXPECT_EQ(static_cast<int>(names.size()), vars.size());
  EXPECT_EQ(vars.size(), 2 * (4 * 5 / 2));
  const VariableMap sym(5, LpMode::kSymmetric);
  EXPECT_EQ(sym.Index(Family::kLeft, 3, 2), sym.Index(Family::kRight, 3, 2));
}

// The bilinear term with its factor multiplied back in is p(x, i) exactly.
TEST(LpBuilderTest, PieceTermReproducesProbability) {
  Rng rng = MakeSubstream(42, 0);
  for (int n = 0; n < 30; ++n) {
    const int m = 3 + n % 5;
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, m), true);
    const VariableMap vars(m, LpMode::kGeneral);
    const std::vector<double> values = ValuesFromMechanism(mech, vars);
    for (int k = 0; k < 20; ++k) {
      const double x = UniformIn(rng, -1.0, 1.0);
      const std::vector<double> p = OutputDistribution(mech, x);
      for (int i = 1; i <= m; ++i) {
        const BilinearTerm term = PointTerm(mech.layout(), vars, x, i);
        EXPECT_NEAR(values[term.factor] * term.form.Evaluate(values), p[i - 1], 1e-12);
      }
    }
  }
}

TEST(LpBuilderTest, FrozenFormsSandwichTheProbability) {
  Rng rng = MakeSubstream(43, 0);
  for (int n = 0; n < 30; ++n) {
    const int m = 3 + n % 5;
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, m), true);
    const VariableMap vars(m, LpMode::kGeneral);
    const std::vector<double> values = ValuesFromMechanism(mech, vars);
    const ProbBounds bounds = ProbBounds::Band(mech.selection().left_table(),
                                               mech.selection().right_table(), 0.2);
    for (int k = 0; k < 20; ++k) {
      const double x = UniformIn(rng, -1.0, 1.0);
      const std::vector<double> p = OutputDistribution(mech, x);
      for (int i = 1; i <= m; ++i) {
        const double z = ZUpper(mech.layout(), vars, bounds, x, i).Evaluate(values);
        const double w =
            WLower(mech.layout(), vars, bounds, Anchor::Edge(x), i).Evaluate(values);
        EXPECT_GE(z, p[i - 1] - 1e-12);
        EXPECT_LE(w, p[i - 1] + 1e-12);
      }
    }
  }
}

TEST(LpBuilderTest, LimitAnchorMatchesLeftLimit) {
  const Mechanism mech = MakeErm({0.5, UniformBins(6, 1.0, 0.5)});
  const VariableMap vars(6, LpMode::kGeneral);
  const std::vector<double> values = ValuesFromMechanism(mech, vars);
  // Pinning the bounds to the values makes the frozen form exact.
  const SelectionDistribution& sel = mech.selection();
  const ProbBounds exact(sel.left_table(), sel.left_table(), sel.right_table(),
                         sel.right_table());
  for (int k = 2; k <= 5; ++k) {
    if (!mech.layout().InDomain(k)) continue;
    const std::vector<double> limit =
        OutputDistributionLimit(mech, k, LimitSide::kFromLeft);
    // Bins right of B_k are anchored at the value, not the limit.
    for (int i = 1; i <= 6; ++i) {
      if (i > k) {
        EXPECT_NEAR(WLower(mech.layout(), vars, exact, Anchor::LimitAt(k), i)
                        .Evaluate(values),
                    OutputDistribution(mech, mech.layout().bin(k))[i - 1], 1e-12);
        continue;
      }
      EXPECT_NEAR(WLower(mech.layout(), vars, exact, Anchor::LimitAt(k), i)
                      .Evaluate(values),
                  limit[i - 1], 1e-12);
    }
  }
}

TEST(LpBuilderTest, UniformObjectiveMatchesUpperBound) {
  Rng rng = MakeSubstream(44, 0);
  for (int n = 0; n < 30; ++n) {
    const int m = 3 + n % 5;
    const Mechanism mech = RandomMechanism(rng, RandomSymmetricLayout(rng, m), false);
    const ProbBounds bounds = ProbBounds::Constant(m, kMinBound, 1.0);
    const LinearProgram lp =
        BuildLp(mech.layout(), 1.0, bounds, InputDistribution::Uniform(),
                ConstraintFamily::kFull, LpMode::kSymmetric);
    const VariableMap vars(m, LpMode::kSymmetric);
    const std::vector<double> values = ValuesFromMechanism(mech, vars);
    double obj = lp.objective_constant;
    for (int k = 0; k < lp.n_vars; ++k) obj += lp.objective[k] * values[k];
    EXPECT_NEAR(obj * lp.bound_scale,
                MaeUpperBound(mech, InputDistribution::Uniform()), 1e-10);
  }
}

// m = 3, bins {-2, 0, 2}, c = 1: both reachable intervals have width 1 and
// zeta_1 + zeta_2 = 2 q_2(1), so the objective is 4 + 4 q_2(1).
TEST(LpBuilderTest, SmallObjectiveByHand) {
  const BinLayout layout(1.0, 1.0, {-2.0, 0.0, 2.0});
  const VariableMap vars(3, LpMode::kSymmetric);
  const LinearForm obj = ObjectiveUniform(layout, vars);
  EXPECT_DOUBLE_EQ(obj.constant, 4.0);
  EXPECT_DOUBLE_EQ(obj.coeffs[vars.Index(Family::kLeft, 2, 1)], 4.0);
  EXPECT_DOUBLE_EQ(obj.coeffs[vars.Index(Family::kLeft, 2, 2)], 0.0);
  EXPECT_DOUBLE_EQ(obj.coeffs[vars.Index(Family::kLeft, 1, 1)], 0.0);
}

// A tight band around a mechanism that is private with room to spare keeps
// the LP feasible; whatever it returns must pass the audit.
TEST(LpBuilderTest, FeasibleFullLpYieldsPrivateMechanism) {
  for (const LpMode mode : {LpMode::kSymmetric, LpMode::kGeneral}) {
    const Mechanism seed = MakeRqm({0.22, UniformBins(4, 1.0, 1.7)});
    const double eps = 1.1;
    ASSERT_LT(EmpiricalEpsilon(seed).eps_emp, eps - 0.01);
    const SelectionDistribution& sel = seed.selection();
    const ProbBounds bounds =
        ProbBounds::Band(sel.left_table(), sel.right_table(), 1e-3);
    const LinearProgram lp =
        BuildLp(seed.layout(), eps, bounds, InputDistribution::Uniform(),
                ConstraintFamily::kFull, mode);
    const LpSolution sol = Solve(lp);
    ASSERT_EQ(sol.status, LpStatus::kOptimal) << LpModeName(mode);
    EXPECT_TRUE(CheckSolution(lp, sol).ok);
    const Mechanism mech = MechanismFromValues(seed.layout(), VariableMap(4, mode),
                                               sol.values);
    EXPECT_LE(EmpiricalEpsilon(mech).eps_emp, eps + kAuditSlack);
    EXPECT_LE(ExactMae(mech, InputDistribution::Uniform()),
              (sol.objective + lp.objective_constant) * lp.bound_scale + 1e-9);
  }
}

TEST(LpBuilderTest, DumpIsDeterministic) {
  const BinLayout layout = UniformBins(5, 1.0, 1.5);
  const ProbBounds bounds = ProbBounds::Constant(5, 0.02, 0.9);
  const auto build = [&] {
    return DumpLp(BuildLp(layout, 1.0, bounds, InputDistribution::Uniform(),
                          ConstraintFamily::kFull, LpMode::kGeneral));
  };
  const std::string first = build();
  EXPECT_EQ(first, build());
  EXPECT_NE(first.find("q"), std::string::npos);
}

TEST(LpBuilderTest, RejectsMismatchedInputs) {
  const BinLayout asym(1.0, 1.0, {-2.0, -0.5, 0.2, 2.0});
  EXPECT_THROW(BuildLp(asym, 1.0, ProbBounds::Constant(4, 0.01, 1.0),
                       InputDistribution::Uniform(), ConstraintFamily::kFull,
                       LpMode::kSymmetric),
               DomainError);
  EXPECT_THROW(BuildLp(UniformBins(4, 1.0, 1.0), 1.0,
                       ProbBounds::Constant(5, 0.01, 1.0),
                       InputDistribution::Uniform(), ConstraintFamily::kFull,
                       LpMode::kSymmetric),
               DomainError);
  EXPECT_THROW(BuildLp(UniformBins(4, 1.0, 1.0), 1.0,
                       ProbBounds::Constant(4, 0.01, 1.0),
                       InputDistribution::Uniform(), ConstraintFamily::kReduced,
                       LpMode::kGeneral),
               DomainError);
}

}  // namespace
}  // namespace dpq
