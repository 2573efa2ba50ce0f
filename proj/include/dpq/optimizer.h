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
#ifndef DPQ_OPTIMIZER_H_
#define DPQ_OPTIMIZER_H_

#include <optional>
#include <string>
#include <vector>

#include "dpq/bin_layout.h"
#include "dpq/input_distribution.h"
#include "dpq/linear_program.h"
#include "dpq/lp_builder.h"
#include "dpq/mechanism.h"

namespace dpq {

// Local search over (o, u) tables: each visited table t is turned into the
// band o = q (1 - f h), u = q (1 + f h) around t and solved as one LP. Moves
// shift h of mass between two entries of a row.
struct PatternSearchOptions {
  double lattice_step = 0.05;
  int max_lattice_m = 4;  // larger m seeds only from RQM/ERM tables
  std::vector<double> steps = {0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005};
  double band_factor = 0.3;
  double seed_band = 1e-9;
  int chains = 3;
  int max_moves_per_step = 200;
};

// Reduced constraints read o only at the two w anchors and u only at the z
// anchor, so the bound grid collapses to those scalars.
struct ReducedGridOptions {
  int points = 100;
  double lo = 1e-4;
  double hi = 0.5;
  // Used when the z anchor factor is not pinned to 1.
  std::vector<double> upper_options = {0.25, 0.5, 0.75, 1.0};
};

struct BoundGrid {
  enum class Kind { kExplicit, kPatternSearch, kReducedScalars };
  Kind kind = Kind::kPatternSearch;
  std::vector<ProbBounds> explicit_bounds;
  PatternSearchOptions pattern;
  ReducedGridOptions reduced;

  static BoundGrid Explicit(std::vector<ProbBounds> bounds);
  static BoundGrid PatternSearch(PatternSearchOptions options = {});
  static BoundGrid ReducedScalars(ReducedGridOptions options = {});
  static BoundGrid DefaultFor(ConstraintFamily family);
};

struct LeaderboardEntry {
  int index = 0;
  std::vector<double> bins;
  std::string point;
  std::string status;
  bool feasible = false;
  double objective = 0.0;  // LP value without the dropped constant
  double mae_bound = 0.0;  // (objective + constant) * bound_scale
  double exact_mae = 0.0;
  double audit_eps = 0.0;
};

enum class OptmStatus { kOk, kNoFeasible };

struct OptmResult {
  OptmStatus status = OptmStatus::kNoFeasible;
  std::string message;
  std::optional<Mechanism> mechanism;
  double objective = 0.0;
  double mae_bound = 0.0;
  double exact_mae = 0.0;
  double audit_eps = 0.0;
  int winner_index = -1;
  int infeasible_points = 0;
  std::vector<LeaderboardEntry> leaderboard;
};

inline constexpr char kNoFeasibleMessage[] = "no feasible mechanism at this eps";

struct OptimizerOptions {
  bool parallel = true;
  BuildOptions build;
  // When set, the LP objective uses interval masses estimated from these
  // samples (exact MAE still uses the given distribution).
  std::optional<std::vector<double>> objective_samples;
};

// Everything needed to turn a bound table into a scored grid point.
struct InnerProblem {
  BinLayout layout;
  double eps;
  InputDistribution dist;
  InputDistribution objective_dist;
  ConstraintFamily family;
  LpMode mode;
  BuildOptions build;
};

struct GridPoint {
  ProbBounds bounds;
  std::string label;
};

struct PointOutcome {
  LeaderboardEntry entry;
  std::optional<Mechanism> mechanism;
};

// Solves, converts and audits every point. Outcomes are in input order; an
// LP whose audited eps exceeds the target is reported as rejected.
std::vector<PointOutcome> EvaluateBoundsSerial(const InnerProblem& problem,
                                               const std::vector<GridPoint>& points);
std::vector<PointOutcome> EvaluateBoundsParallel(
    const InnerProblem& problem, const std::vector<GridPoint>& points);

// Algorithm over one fixed layout: minimum surrogate objective wins, ties
// (within 1e-10) go to smaller exact MAE, then to the earlier grid point.
OptmResult OptmInner(const BinLayout& layout, double eps, const BoundGrid& grid,
                     const InputDistribution& dist, ConstraintFamily family,
                     LpMode mode, const OptimizerOptions& options = {});

struct HyperGrid {
  std::vector<double> delta_options;
  // Inner bins are spread uniformly over [-a c, a c] for each scale a.
  std::vector<double> inner_scales;
  // When nonempty, inner bins are instead every increasing choice of m - 2
  // positions from this lattice (asymmetric layouts, general mode).
  std::vector<double> inner_positions;
  // Overrides delta_options x inner_scales when nonempty.
  std::vector<BinLayout> explicit_layouts;
  ConstraintFamily family = ConstraintFamily::kFull;
  LpMode mode = LpMode::kSymmetric;
  BoundGrid bounds;
};

// Delta in {0.2, 0.5, 1, 1.5, 1.7, 2, 2.5, 3, 3.5, 4.1} c and inner scales
// {0.1, ..., 1.0}; general mode uses inner positions {-1, -0.8, ..., 1} c.
HyperGrid DefaultHyperGrid(ConstraintFamily family, LpMode mode);
std::vector<double> DefaultDeltaOptions(double c);
std::vector<BinLayout> LayoutsFor(double c, int m, const HyperGrid& hyper);

// Runs OptmInner per layout and keeps the winner with the smallest exact MAE.
OptmResult OptmOuter(double c, int m, double eps, const HyperGrid& hyper,
                     const InputDistribution& dist,
                     const OptimizerOptions& options = {});

// Hyperparameter search for the closed-form families. A candidate is valid
// when its audited eps is at most the target (plus the audit slack).
struct FamilySearchResult {
  OptmStatus status = OptmStatus::kNoFeasible;
  std::optional<Mechanism> mechanism;
  double parameter = 0.0;  // q or gamma
  double delta = 0.0;
  std::vector<double> bins;
  double exact_mae = 0.0;
  double audit_eps = 0.0;
  double analytic_bound = 0.0;
  int valid_points = 0;
  int evaluated_points = 0;
};

std::vector<double> DefaultRqmQOptions();
std::vector<double> DefaultErmGammaOptions();

FamilySearchResult SearchRqm(double c, int m, double eps,
                             const std::vector<double>& delta_options,
                             const std::vector<double>& q_options,
                             const InputDistribution& dist);
// ERM accepts any bins; layouts typically come from LayoutsFor.
FamilySearchResult SearchErm(double eps, const std::vector<BinLayout>& layouts,
                             const std::vector<double>& gamma_options,
                             const InputDistribution& dist);

std::string LeaderboardCsv(const std::vector<LeaderboardEntry>& entries);

}  // namespace dpq

#endif  // DPQ_OPTIMIZER_H_
