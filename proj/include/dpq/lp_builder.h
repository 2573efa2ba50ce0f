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
#ifndef DPQ_LP_BUILDER_H_
#define DPQ_LP_BUILDER_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpq/bin_layout.h"
#include "dpq/input_distribution.h"
#include "dpq/linear_program.h"
#include "dpq/mechanism.h"
#include "dpq/selection_distribution.h"

namespace dpq {

enum class Family { kLeft, kRight };

// kSymmetric: one table q shared by both sides (symmetric bins only).
// kGeneral: independent left and right tables.
enum class LpMode { kSymmetric, kGeneral };

// kFull: pairwise candidate constraints with box and diagonal monotonicity.
// kReduced: monotone-table constraints anchored at four points.
enum class ConstraintFamily { kFull, kReduced };

const char* LpModeName(LpMode mode);
const char* ConstraintFamilyName(ConstraintFamily family);

// Maps (family, row, column) of the selection tables to LP columns.
class VariableMap {
 public:
  VariableMap(int m, LpMode mode);

  int m() const { return m_; }
  LpMode mode() const { return mode_; }
  int size() const { return per_family_ * (mode_ == LpMode::kGeneral ? 2 : 1); }

  // In symmetric mode the right family aliases the left one.
  int Index(Family family, int row, int col) const;
  std::string Name(int index) const;

 private:
  int m_;
  LpMode mode_;
  int per_family_;
};

struct LinearForm {
  std::vector<double> coeffs;
  double constant = 0.0;

  explicit LinearForm(int n = 0) : coeffs(n, 0.0) {}
  double Evaluate(const std::vector<double>& x) const;
};

// Lower/upper bound tables o and u, one pair per family.
class ProbBounds {
 public:
  // Same tables for both families.
  ProbBounds(TriangularTable lower, TriangularTable upper);
  ProbBounds(TriangularTable left_lower, TriangularTable left_upper,
             TriangularTable right_lower, TriangularTable right_upper);

  // o = lower, u = upper everywhere except row 1, which is pinned to 1.
  static ProbBounds Constant(int m, double lower, double upper);

  // o = max(floor, q (1 - rel)), u = min(1, max(o, q (1 + rel))) around the
  // given centers; row 1 is pinned to 1.
  static ProbBounds Band(const TriangularTable& left_center,
                         const TriangularTable& right_center, double rel);

  double o(Family f, int n, int i) const;
  double u(Family f, int n, int i) const;
  const TriangularTable& lower(Family f) const;
  const TriangularTable& upper(Family f) const;

 private:
  void Validate() const;

  TriangularTable left_lower_;
  TriangularTable left_upper_;
  TriangularTable right_lower_;
  TriangularTable right_upper_;
};

inline constexpr double kMinBound = 1e-12;

// p(x, i) on interval j as factor * form, where factor is one selection
// variable (the one frozen at o or u) and form is linear in the other family.
struct BilinearTerm {
  int factor = -1;
  Family factor_family = Family::kLeft;
  int factor_row = 0;
  int factor_col = 0;
  LinearForm form;
};

BilinearTerm PieceTerm(const BinLayout& layout, const VariableMap& vars, int j,
                       double x, int i);
BilinearTerm PointTerm(const BinLayout& layout, const VariableMap& vars,
                       double x, int i);

struct Anchor {
  enum class Kind { kEdge, kLimit };
  Kind kind;
  double x;
  int k;

  static Anchor Edge(double x) { return {Kind::kEdge, x, 0}; }
  static Anchor LimitAt(int k) { return {Kind::kLimit, 0.0, k}; }
};

// sum_i q_n(i) (B_n - B_i) over left variables.
LinearForm ZetaForm(const BinLayout& layout, const VariableMap& vars, int n);
// sum_{r>j} q^r_{m-j}(m-r+1) (B_r - B_{j+1}).
LinearForm ZetaRightForm(const BinLayout& layout, const VariableMap& vars,
                         int j);

// sum over reachable j of |[B_j,B_{j+1}) & [-c,c]| (zeta_j + zeta_{m-j});
// constant = sum of the same widths times (B_{j+1} - B_j).
LinearForm ObjectiveUniform(const BinLayout& layout, const VariableMap& vars);
// sum over reachable j of mass_j (zeta^l_j + zeta^r_{m-j}).
LinearForm ObjectiveGeneral(const BinLayout& layout,
                            const InputDistribution& dist,
                            const VariableMap& vars);

// Upper bound of p(x, i) for B_i <= x (or B_i > x): the factor is frozen at u.
LinearForm ZUpper(const BinLayout& layout, const VariableMap& vars,
                  const ProbBounds& bounds, double x, int i);
// Lower bound of p at an edge, or of its one-sided limit at a bin (left limit
// for bins left of B_k, value for bins right of B_k): factor frozen at o.
LinearForm WLower(const BinLayout& layout, const VariableMap& vars,
                  const ProbBounds& bounds, const Anchor& anchor, int i);

std::vector<LpRow> ConstraintsFull(const BinLayout& layout,
                                   const VariableMap& vars, double eps,
                                   const ProbBounds& bounds);
std::vector<LpRow> ConstraintsReduced(const BinLayout& layout,
                                      const VariableMap& vars, double eps,
                                      const ProbBounds& bounds,
                                      bool full_box = false);

struct BuildOptions {
  bool reduced_full_box = false;
};

LinearProgram BuildLp(const BinLayout& layout, double eps,
                      const ProbBounds& bounds, const InputDistribution& dist,
                      ConstraintFamily family, LpMode mode,
                      const BuildOptions& options = {});

// Selection tables from LP values; entries are clamped to [0, 1] and rows
// renormalized.
Mechanism MechanismFromValues(const BinLayout& layout, const VariableMap& vars,
                              const std::vector<double>& values,
                              nlohmann::json metadata = nlohmann::json::object());

// Inverse: LP values that reproduce the mechanism's tables.
std::vector<double> ValuesFromMechanism(const Mechanism& mech,
                                        const VariableMap& vars);

}  // namespace dpq

#endif  // DPQ_LP_BUILDER_H_
