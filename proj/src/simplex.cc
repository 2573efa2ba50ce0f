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
#include "dpq/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dpq/errors.h"

namespace dpq {
namespace {

constexpr double kOptimalityTolerance = 1e-9;
constexpr double kRatioTieTolerance = 1e-12;
constexpr double kZeroSnap = 1e-13;
constexpr int kDegenerateRunLimit = 20;

// Row of the standard-form system after shifting by the lower bounds and
// making the right-hand side nonnegative.
struct StandardRow {
  std::vector<double> coeffs;
  Relation relation;
  double rhs;
  double sign;      // -1 when the source row was negated
  int source_row;   // index into lp.constraints, or -1 for an upper bound
  int source_var;   // variable index for upper-bound rows
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double at(int r, int c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs holds -objective.
  double& cost(int c) { return at(rows_, c); }
  double cost(int c) const { return at(rows_, c); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void Pivot(int pr, int pc) {
    const int stride = cols_ + 1;
    double* prow = &data_[pr * stride];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c <= cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * stride];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) {
        row[c] -= f * prow[c];
        // Round-off residue would otherwise break exact degeneracy.
        if (std::abs(row[c]) < kZeroSnap) row[c] = 0.0;
      }
      row[pc] = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Dantzig's rule while the objective moves; after a run of degenerate pivots
// switch to Bland's rule (lowest-index improving column, lowest-index basic
// variable among tied ratios) until a pivot makes progress again.
PhaseResult RunPhase(Tableau& t, std::vector<int>& basis, int allowed_cols,
                     long long& iterations, long long cap) {
  int degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= kDegenerateRunLimit;
    int enter = -1;
    double most_negative = -kOptimalityTolerance;
    for (int c = 0; c < allowed_cols; ++c) {
      if (t.cost(c) < most_negative) {
        enter = c;
        if (bland) break;
        most_negative = t.cost(c);
      }
    }
    if (enter < 0) return PhaseResult::kOptimal;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTolerance) continue;
      const double ratio = t.rhs(r) / a;
      if (leave < 0 || ratio < best - kRatioTieTolerance * (1 + std::abs(best))) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + kRatioTieTolerance * (1 + std::abs(best)) &&
                 basis[r] < basis[leave]) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
    if (leave < 0) return PhaseResult::kUnbounded;
    if (++iterations > cap) throw std::runtime_error("iteration limit");
    degenerate_run = best <= kRatioTieTolerance ? degenerate_run + 1 : 0;
    t.Pivot(leave, enter);
    basis[leave] = enter;
  }
}

void LoadCosts(Tableau& t, const std::vector<int>& basis,
               const std::vector<double>& cost) {
  for (int c = 0; c <= t.cols(); ++c) t.cost(c) = c < t.cols() ? cost[c] : 0.0;
  for (int r = 0; r < t.rows(); ++r) {
    const double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c <= t.cols(); ++c) t.cost(c) -= cb * t.at(r, c);
  }
}

}  // namespace

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution Solve(const LinearProgram& lp) {
  const int n = lp.n_vars;
  if (static_cast<int>(lp.objective.size()) != n ||
      static_cast<int>(lp.lower.size()) != n ||
      static_cast<int>(lp.upper.size()) != n) {
    throw ContractViolation("linear program vectors do not match n_vars");
  }
  LpSolution sol;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(lp.lower[i])) {
      throw ContractViolation("variable lower bounds must be finite");
    }
    if (lp.upper[i] < lp.lower[i]) {
      sol.status = LpStatus::kInfeasible;
      sol.diagnostic = "empty bounds for " + lp.var_names[i];
      return sol;
    }
  }

  std::vector<StandardRow> rows;
  rows.reserve(lp.constraints.size() + n);
  for (int k = 0; k < lp.NumRows(); ++k) {
    const LpRow& src = lp.constraints[k];
    if (static_cast<int>(src.coeffs.size()) != n) {
      throw ContractViolation("row " + std::to_string(k) + " has wrong width");
    }
    StandardRow row{src.coeffs, src.relation, src.rhs, 1.0, k, -1};
    for (int i = 0; i < n; ++i) row.rhs -= src.coeffs[i] * lp.lower[i];
    if (row.rhs < 0) {
      for (double& v : row.coeffs) v = -v;
      row.rhs = -row.rhs;
      row.sign = -1.0;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
    rows.push_back(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(lp.upper[i])) continue;
    StandardRow row{std::vector<double>(n, 0.0), Relation::kLessEqual,
                    lp.upper[i] - lp.lower[i], 1.0, -1, i};
    row.coeffs[i] = 1.0;
    rows.push_back(std::move(row));
  }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  int n_art = 0;
  for (const StandardRow& row : rows) {
    if (row.relation != Relation::kEqual) ++n_slack;
    if (row.relation != Relation::kLessEqual) ++n_art;
  }
  const int first_art = n + n_slack;
  const int cols = first_art + n_art;
  Tableau t(m, cols);
  std::vector<int> basis(m);
  std::vector<int> unit_col(m);
  int next_slack = n;
  int next_art = first_art;
  for (int r = 0; r < m; ++r) {
    const StandardRow& row = rows[r];
    for (int i = 0; i < n; ++i) t.at(r, i) = row.coeffs[i];
    t.rhs(r) = row.rhs;
    if (row.relation == Relation::kLessEqual) {
      t.at(r, next_slack) = 1.0;
      unit_col[r] = next_slack++;
    } else {
      if (row.relation == Relation::kGreaterEqual) t.at(r, next_slack++) = -1.0;
      t.at(r, next_art) = 1.0;
      unit_col[r] = next_art++;
    }
    basis[r] = unit_col[r];
  }

  const long long size = n + lp.NumRows();
  const long long cap = 10 * size * size + 10;
  long long iterations = 0;

  // Phase one: minimize the sum of artificials.
  std::vector<double> cost(cols, 0.0);
  for (int c = first_art; c < cols; ++c) cost[c] = 1.0;
  LoadCosts(t, basis, cost);
  RunPhase(t, basis, cols, iterations, cap);
  if (-t.cost(cols) > kFeasibilityTolerance) {
    sol.status = LpStatus::kInfeasible;
    sol.iterations = static_cast<int>(iterations);
    sol.diagnostic = "phase one ended with artificial sum " +
                     std::to_string(-t.cost(cols));
    return sol;
  }
  // Drive remaining artificials out of the basis; rows with no eligible
  // pivot are redundant and keep a zero artificial.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < first_art) continue;
    for (int c = 0; c < first_art; ++c) {
      if (std::abs(t.at(r, c)) > kPivotTolerance) {
        t.Pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // Phase two.
  std::fill(cost.begin(), cost.end(), 0.0);
  for (int i = 0; i < n; ++i) cost[i] = lp.objective[i];
  LoadCosts(t, basis, cost);
  const PhaseResult result = RunPhase(t, basis, first_art, iterations, cap);
  sol.iterations = static_cast<int>(iterations);
  if (result == PhaseResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    sol.diagnostic = "objective unbounded below";
    return sol;
  }

  sol.values = lp.lower;
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) sol.values[basis[r]] += t.rhs(r);
  }
  sol.objective = 0.0;
  for (int i = 0; i < n; ++i) sol.objective += lp.objective[i] * sol.values[i];
  sol.row_duals.assign(lp.NumRows(), 0.0);
  sol.upper_duals.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    const double y = -t.cost(unit_col[r]);
    if (rows[r].source_row >= 0) {
      sol.row_duals[rows[r].source_row] = rows[r].sign * y;
    } else {
      sol.upper_duals[rows[r].source_var] = y;
    }
  }
  sol.status = LpStatus::kOptimal;
  const ResidualReport report = CheckSolution(lp, sol);
  sol.primal_residual = report.max_primal_violation;
  sol.reduced_cost_violation = report.max_reduced_cost_violation;
  if (report.max_primal_violation > kFeasibilityTolerance) {
    sol.status = LpStatus::kInfeasible;
    sol.diagnostic = "numerically unstable basis: primal residual " +
                     std::to_string(report.max_primal_violation);
  }
  return sol;
}

ResidualReport CheckSolution(const LinearProgram& lp, const LpSolution& sol,
                             double tolerance) {
  const int n = lp.n_vars;
  if (static_cast<int>(sol.values.size()) != n) {
    throw ContractViolation("solution has wrong dimension");
  }
  ResidualReport rep;
  const std::vector<double>& x = sol.values;
  std::vector<double> activity(lp.NumRows(), 0.0);
  for (int k = 0; k < lp.NumRows(); ++k) {
    const LpRow& row = lp.constraints[k];
    double act = 0.0;
    for (int i = 0; i < n; ++i) act += row.coeffs[i] * x[i];
    activity[k] = act;
    double viol = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual:
        viol = act - row.rhs;
        break;
      case Relation::kGreaterEqual:
        viol = row.rhs - act;
        break;
      case Relation::kEqual:
        viol = std::abs(act - row.rhs);
        break;
    }
    viol = std::max(viol, 0.0);
    rep.max_primal_violation = std::max(rep.max_primal_violation, viol);
    if (viol > tolerance) rep.violated_rows.push_back(k);
  }
  for (int i = 0; i < n; ++i) {
    const double viol =
        std::max({lp.lower[i] - x[i], x[i] - lp.upper[i], 0.0});
    rep.max_primal_violation = std::max(rep.max_primal_violation, viol);
    if (viol > tolerance) rep.violated_rows.push_back(-(i + 1));
  }

  const bool has_duals = static_cast<int>(sol.row_duals.size()) == lp.NumRows() &&
                         static_cast<int>(sol.upper_duals.size()) == n;
  if (has_duals) {
    std::vector<double> d(lp.objective);
    for (int k = 0; k < lp.NumRows(); ++k) {
      const double y = sol.row_duals[k];
      const LpRow& row = lp.constraints[k];
      for (int i = 0; i < n; ++i) d[i] -= y * row.coeffs[i];
      double sign_viol = 0.0;
      if (row.relation == Relation::kLessEqual) sign_viol = std::max(y, 0.0);
      if (row.relation == Relation::kGreaterEqual) sign_viol = std::max(-y, 0.0);
      rep.max_dual_sign_violation = std::max(rep.max_dual_sign_violation, sign_viol);
      rep.max_complementarity = std::max(
          rep.max_complementarity, std::abs(y * (activity[k] - row.rhs)));
    }
    double dual_objective = 0.0;
    for (int k = 0; k < lp.NumRows(); ++k) {
      dual_objective += sol.row_duals[k] * lp.constraints[k].rhs;
    }
    for (int i = 0; i < n; ++i) {
      const double yu = sol.upper_duals[i];
      d[i] -= yu;
      rep.max_dual_sign_violation = std::max(rep.max_dual_sign_violation, std::max(yu, 0.0));
      if (std::isfinite(lp.upper[i])) {
        rep.max_complementarity = std::max(
            rep.max_complementarity, std::abs(yu * (x[i] - lp.upper[i])));
        dual_objective += yu * lp.upper[i];
      }
      rep.max_reduced_cost_violation =
          std::max(rep.max_reduced_cost_violation, std::max(-d[i], 0.0));
      rep.max_complementarity = std::max(
          rep.max_complementarity, std::abs(d[i] * (x[i] - lp.lower[i])));
      dual_objective += d[i] * lp.lower[i];
    }
    double primal_objective = 0.0;
    for (int i = 0; i < n; ++i) primal_objective += lp.objective[i] * x[i];
    rep.duality_gap = std::abs(primal_objective - dual_objective);
  }
  rep.ok = rep.max_primal_violation <= tolerance &&
           rep.max_reduced_cost_violation <= tolerance &&
           rep.max_dual_sign_violation <= tolerance &&
           rep.max_complementarity <= tolerance * 100 &&
           rep.duality_gap <= tolerance * 100 * (1 + std::abs(sol.objective));
  return rep;
}

}  // namespace dpq
