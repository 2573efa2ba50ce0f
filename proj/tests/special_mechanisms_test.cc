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
#include "dpq/special_mechanisms.h"

#include <gtest/gtest.h>

#include <cmath>

#include "dpq/errors.h"
#include "dpq/mae.h"
#include "dpq/privacy_audit.h"

namespace dpq {
namespace {

TEST(SpecialMechanismsTest, RqmRowsAreGeometricAndNormalized) {
  const double q = 0.3;
  const SelectionDistribution sel = RqmSelection(5, q);
  for (int n = 1; n < 5; ++n) {
    double total = 0.0;
    for (int i = 1; i <= n; ++i) total += sel.left(n, i);
    EXPECT_NEAR(total, 1.0, 1e-12);
    // The farthest bin takes the tail mass; the rest decay geometrically.
    EXPECT_NEAR(sel.left(n, 1), std::pow(1 - q, n - 1), 1e-15);
    for (int i = 2; i < n; ++i) {
      EXPECT_NEAR(sel.left(n, i) / sel.left(n, i + 1), 1 - q, 1e-12);
    }
  }
}

TEST(SpecialMechanismsTest, ErmRowsFavorCloserBins) {
  const BinLayout layout = UniformBins(6, 1.0, 1.0);
  const SelectionDistribution sel = ErmSelection(layout, 0.5);
  for (int n = 2; n < 6; ++n) {
    for (int i = 1; i < n; ++i) EXPECT_LT(sel.left(n, i), sel.left(n, i + 1));
  }
}

TEST(SpecialMechanismsTest, RqmNeedsUniformBins) {
  EXPECT_THROW(MakeRqm({0.2, BinLayout::FromBins(1.0, {-3.0, -0.5, 0.5, 3.0})}),
               DomainError);
  EXPECT_NO_THROW(MakeErm({0.2, BinLayout::FromBins(1.0, {-3.0, -0.5, 0.5, 3.0})}));
}

TEST(SpecialMechanismsTest, ErmErrorBoundHoldsAcrossGrid) {
  for (int m : {4, 5, 6, 8}) {
    for (double delta : {0.2, 0.7, 1.5, 3.0}) {
      for (double gamma : {0.01, 0.1, 0.5, 1.0, 3.0}) {
        const Mechanism mech = MakeErm({gamma, UniformBins(m, 1.0, delta)});
        EXPECT_GE(ErmErrorBound(m, 1.0, delta, gamma) + 1e-9,
                  ExactMae(mech, InputDistribution::Uniform()));
      }
    }
  }
}

TEST(SpecialMechanismsTest, ErmPrivacyBoundHoldsForModerateOverhang) {
  for (int m : {4, 5, 6, 8}) {
    for (double delta : {0.7, 1.5, 3.0}) {
      for (double gamma : {0.01, 0.1, 0.5, 1.0, 3.0}) {
        const double audited =
            EmpiricalEpsilon(MakeErm({gamma, UniformBins(m, 1.0, delta)})).eps_emp;
        const BoundValue bound = ErmPrivacyBound(m, 1.0, delta, gamma);
        EXPECT_TRUE(bound.assumption_satisfied);
        EXPECT_GE(bound.value, audited)
            << "m=" << m << " delta=" << delta << " gamma=" << gamma;
      }
    }
  }
}

// With a small overhang p(x, 1) near x = c is about
// q_{m-1}(1) (B_m - c) / (B_m - B_1), far below the bound's floor
// c e^-gamma / (2 m (c + delta)). The bound does not hold there.
TEST(SpecialMechanismsTest, ErmPrivacyBoundFailsForSmallOverhang) {
  const Mechanism mech = MakeErm({0.01, UniformBins(4, 1.0, 0.2)});
  const AuditReport report = EmpiricalEpsilon(mech);
  // Hand computation: max p(., 1) at x = -1 and min at x = 1.
  const SelectionDistribution& sel = mech.selection();
  double top = 0.0;
  for (int r = 2; r <= 4; ++r) {
    const double b = mech.layout().bin(r);
    top += sel.right(3, 5 - r) * (b + 1.0) / (b - mech.layout().bin(1));
  }
  const double bottom = sel.left(3, 1) * (1.2 - 1.0) / 2.4;
  EXPECT_NEAR(report.eps_emp, std::log(top / bottom), 1e-9);
  EXPECT_GT(report.eps_emp, ErmPrivacyBound(4, 1.0, 0.2, 0.01).value + 1.0);
}

TEST(SpecialMechanismsTest, RqmBoundHoldsAcrossGrid) {
  for (int m : {3, 4, 6, 8}) {
    for (double delta : {0.2, 0.7, 1.5, 3.0}) {
      for (double q : {0.05, 0.2, 0.5, 0.8}) {
        const double audited =
            EmpiricalEpsilon(MakeRqm({q, UniformBins(m, 1.0, delta)})).eps_emp;
        EXPECT_GE(RqmPrivacyBound(m, 1.0, delta, q) + 1e-9, audited)
            << "m=" << m << " delta=" << delta << " q=" << q;
      }
    }
  }
}

TEST(SpecialMechanismsTest, BoundArgumentsAreChecked) {
  EXPECT_THROW(RqmPrivacyBound(4, 1.0, 0.0, 0.3), DomainError);
  EXPECT_THROW(RqmPrivacyBound(4, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(ErmPrivacyBound(4, 1.0, 1.0, -1.0), DomainError);
  EXPECT_FALSE(ErmPrivacyBound(3, 1.0, 1.0, 0.5).assumption_satisfied);
}

}  // namespace
}  // namespace dpq
