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
#ifndef DPQ_SIMPLEX_H_
#define DPQ_SIMPLEX_H_

#include <vector>

#include "dpq/linear_program.h"

namespace dpq {

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kFeasibilityTolerance = 1e-9;

// Dense two-phase primal simplex with Bland's rule. Deterministic: the same
// program always yields the same bytes. Throws std::runtime_error when the
// iteration cap 10 (n_vars + n_rows)^2 is hit.
LpSolution Solve(const LinearProgram& lp);

struct ResidualReport {
  double max_primal_violation = 0.0;
  // Rows (0-based) whose violation exceeds the tolerance; bound violations
  // are reported as -(variable index + 1).
  std::vector<int> violated_rows;
  double max_reduced_cost_violation = 0.0;
  double max_dual_sign_violation = 0.0;
  double max_complementarity = 0.0;
  double duality_gap = 0.0;
  bool ok = false;
};

// Recomputes residuals, dual signs, reduced costs and complementary
// slackness from the program data and the reported solution.
ResidualReport CheckSolution(const LinearProgram& lp, const LpSolution& sol,
                             double tolerance = kFeasibilityTolerance);

}  // namespace dpq

#endif  // DPQ_SIMPLEX_H_
