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
#ifndef DPQ_LINEAR_PROGRAM_H_
#define DPQ_LINEAR_PROGRAM_H_

#include <string>
#include <vector>

namespace dpq {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string label;
};

// min objective . x subject to rows and lo <= x <= hi.
struct LinearProgram {
  int n_vars = 0;
  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<LpRow> constraints;
  std::vector<double> lower;
  std::vector<double> upper;
  // Constant dropped from the objective; bound_scale * (objective + constant)
  // is the MAE upper bound the objective was derived from.
  double objective_constant = 0.0;
  double bound_scale = 1.0;

  int NumRows() const { return static_cast<int>(constraints.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  int iterations = 0;
  // Largest primal violation and largest negative reduced cost.
  double primal_residual = 0.0;
  double reduced_cost_violation = 0.0;
  // Multipliers for the rows and for the finite upper bounds, with the sign
  // convention objective = A^T y + d, d >= 0.
  std::vector<double> row_duals;
  std::vector<double> upper_duals;
  std::string diagnostic;
};

const char* LpStatusName(LpStatus status);

// Plain-text listing of variables, objective and rows; byte-stable.
std::string DumpLp(const LinearProgram& lp);

// CPLEX LP text format for cross-checking with external solvers.
std::string DumpCplexLp(const LinearProgram& lp);

}  // namespace dpq

#endif  // DPQ_LINEAR_PROGRAM_H_
