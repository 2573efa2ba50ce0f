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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "dpq/errors.h"
#include "dpq/format.h"
#include "dpq/mae.h"
#include "dpq/privacy_audit.h"
#include "dpq/simplex.h"
#include "dpq/special_mechanisms.h"

namespace dpq {
namespace {

constexpr double kObjectiveTieTolerance = 1e-10;
constexpr double kImprovement = 1e-12;

struct Tables {
  TriangularTable left;
  TriangularTable right;
  std::string label;
};

std::string Fmt(double v) { return ShortestDouble(v); }

PointOutcome EvaluatePoint(const InnerProblem& p, const GridPoint& g) {
  PointOutcome out;
  LeaderboardEntry& e = out.entry;
  e.bins = p.layout.bins();
  e.point = g.label;
  try {
    const LinearProgram lp = BuildLp(p.layout, p.eps, g.bounds,
                                     p.objective_dist, p.family, p.mode, p.build);
    const LpSolution sol = Solve(lp);
    if (sol.status != LpStatus::kOptimal) {
      e.status = LpStatusName(sol.status);
      return out;
    }
    e.objective = sol.objective;
    e.mae_bound = (sol.objective + lp.objective_constant) * lp.bound_scale;
    const VariableMap vars(p.layout.m(), p.mode);
    nlohmann::json meta = {{"family", "optm"},
                           {"eps", p.eps},
                           {"constraints", ConstraintFamilyName(p.family)},
                           {"mode", LpModeName(p.mode)},
                           {"grid_point", g.label},
                           {"objective", sol.objective},
                           {"mae_bound", e.mae_bound}};
    Mechanism mech = MechanismFromValues(p.layout, vars, sol.values, meta);
    e.exact_mae = ExactMae(mech, p.dist);
    e.audit_eps = EmpiricalEpsilon(mech).eps_emp;
    if (e.audit_eps > p.eps + kAuditSlack) {
      e.status = "audit_rejected";
      return out;
    }
    e.status = "optimal";
    e.feasible = true;
    out.mechanism = std::move(mech);
  } catch (const std::exception& ex) {
    e.status = std::string("rejected: ") + ex.what();
  }
  return out;
}

// Better in the inner ordering: smaller objective, then smaller exact MAE.
// Callers scan in grid order, so equal entries keep the earlier index.
bool InnerBetter(const LeaderboardEntry& a, const LeaderboardEntry& b) {
  if (a.objective < b.objective - kObjectiveTieTolerance) return true;
  if (a.objective > b.objective + kObjectiveTieTolerance) return false;
  return a.exact_mae < b.exact_mae;
}

class Runner {
 public:
  Runner(const InnerProblem& problem, bool parallel, OptmResult& result)
      : problem_(problem), parallel_(parallel), result_(result) {}

  std::vector<PointOutcome> Run(const std::vector<GridPoint>& points) {
    std::vector<PointOutcome> outs =
        parallel_ ? EvaluateBoundsParallel(problem_, points)
                  : EvaluateBoundsSerial(problem_, points);
    for (PointOutcome& o : outs) {
      o.entry.index = static_cast<int>(result_.leaderboard.size());
      result_.leaderboard.push_back(o.entry);
      if (!o.entry.feasible) {
        ++result_.infeasible_points;
        continue;
      }
      if (!result_.mechanism ||
          InnerBetter(o.entry, result_.leaderboard[result_.winner_index])) {
        result_.winner_index = o.entry.index;
        result_.mechanism = o.mechanism;
      }
    }
    return outs;
  }

 private:
  const InnerProblem& problem_;
  bool parallel_;
  OptmResult& result_;
};

// Rows that some reachable input reads, per family.
std::vector<int> UsedRows(const BinLayout& layout, LpMode mode, Family f) {
  std::vector<int> rows;
  for (int j : layout.ReachableIntervals()) {
    if (mode == LpMode::kSymmetric || f == Family::kLeft) rows.push_back(j);
    if (mode == LpMode::kSymmetric || f == Family::kRight) {
      rows.push_back(layout.m() - j);
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

std::vector<Family> Families(LpMode mode) {
  if (mode == LpMode::kSymmetric) return {Family::kLeft};
  return {Family::kLeft, Family::kRight};
}

Mechanism FromTables(const BinLayout& layout, LpMode mode, const Tables& t) {
  if (mode == LpMode::kSymmetric) {
    return Mechanism(layout, SelectionDistribution::Symmetric(t.left));
  }
  return Mechanism(layout, SelectionDistribution::TwoFamily(t.left, t.right));
}

ProbBounds BandAround(const Tables& t, LpMode mode, double rel) {
  return ProbBounds::Band(t.left, mode == LpMode::kSymmetric ? t.left : t.right,
                          rel);
}

// All ways to write `units` as an ordered sum of n nonnegative integers.
void Compositions(int n, int units, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(units);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= units; ++k) {
    cur.push_back(k);
    Compositions(n, units - k, cur, out);
    cur.pop_back();
  }
}

std::vector<Tables> LatticeSeeds(int m, double step) {
  const int units = static_cast<int>(std::lround(1.0 / step));
  std::vector<std::vector<std::vector<int>>> per_row(m);
  for (int n = 2; n <= m - 1; ++n) {
    std::vector<int> cur;
    Compositions(n, units, cur, per_row[n]);
  }
  std::vector<Tables> seeds;
  std::vector<size_t> pick(m, 0);
  while (true) {
    TriangularTable t(m - 1);
    t.at(1, 1) = 1.0;
    for (int n = 2; n <= m - 1; ++n) {
      for (int i = 1; i <= n; ++i) {
        t.at(n, i) = static_cast<double>(per_row[n][pick[n]][i - 1]) / units;
      }
    }
    seeds.push_back({t, t, "lattice " + std::to_string(seeds.size())});
    int n = m - 1;
    while (n >= 2) {
      if (++pick[n] < per_row[n].size()) break;
      pick[n] = 0;
      --n;
    }
    if (n < 2) break;
  }
  return seeds;
}

std::vector<Tables> ParametricSeeds(const BinLayout& layout) {
  std::vector<Tables> seeds;
  const int m = layout.m();
  for (int k = 1; k <= 99; ++k) {
    const double q = k / 100.0;
    const TriangularTable t = RqmSelection(m, q).left_table();
    seeds.push_back({t, t, "rqm q=" + Fmt(q)});
  }
  for (int k = 0; k < 40; ++k) {
    const double gamma = 1e-2 * std::pow(1e4, k / 39.0);
    const TriangularTable t = ErmSelection(layout, gamma).left_table();
    seeds.push_back({t, t, "erm gamma=" + Fmt(gamma)});
  }
  return seeds;
}

struct SeedScore {
  double eps = 0.0;
  double mae = 0.0;
};

// MAE is only needed for seeds that meet the target.
SeedScore ScoreSeed(const InnerProblem& p, const Tables& t) {
  const Mechanism mech = FromTables(p.layout, p.mode, t);
  const double eps = BreakpointEpsilon(mech);
  if (eps > p.eps) return {eps, std::numeric_limits<double>::infinity()};
  return {eps, ExactMae(mech, p.dist)};
}

std::vector<SeedScore> ScoreSeeds(const InnerProblem& p,
                                  const std::vector<Tables>& seeds,
                                  bool parallel) {
  std::vector<SeedScore> scores(seeds.size());
  const long n = static_cast<long>(seeds.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k) scores[k] = ScoreSeed(p, seeds[k]);
  } else {
    for (long k = 0; k < n; ++k) scores[k] = ScoreSeed(p, seeds[k]);
  }
  return scores;
}

// Moves that shift h of mass from entry b to entry a of one row.
std::vector<Tables> Neighbors(const Tables& cur, const BinLayout& layout,
                              LpMode mode, double h) {
  std::vector<Tables> out;
  for (Family f : Families(mode)) {
    const TriangularTable& base = f == Family::kLeft ? cur.left : cur.right;
    for (int n : UsedRows(layout, mode, f)) {
      if (n < 2) continue;
      for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
          if (a == b || base.at(n, b) < h) continue;
          Tables next = cur;
          TriangularTable& t = f == Family::kLeft ? next.left : next.right;
          t.at(n, a) += h;
          t.at(n, b) -= h;
          if (mode == LpMode::kSymmetric) next.right = next.left;
          next.label = std::string(f == Family::kLeft ? "l" : "r") + " row " +
                       std::to_string(n) + " " + std::to_string(b) + "->" +
                       std::to_string(a) + " h=" + Fmt(h);
          out.push_back(std::move(next));
        }
      }
    }
  }
  return out;
}

// Coordinate descent on the audited eps; used only when no seed meets the
// target, which happens on layouts whose minimum eps is close to it.
std::optional<Tables> DescendToTarget(const InnerProblem& p, Tables start,
                                      double start_eps, bool parallel) {
  static const double kSteps[] = {0.05, 0.02, 0.01, 0.005, 0.002,
                                  0.001, 5e-4, 2e-4, 1e-4};
  Tables cur = std::move(start);
  double cur_eps = start_eps;
  for (double h : kSteps) {
    for (int it = 0; it < 500 && cur_eps > p.eps; ++it) {
      const std::vector<Tables> next = Neighbors(cur, p.layout, LpMode::kSymmetric, h);
      if (next.empty()) break;
      const std::vector<SeedScore> scores = ScoreSeeds(p, next, parallel);
      size_t best = 0;
      for (size_t k = 1; k < scores.size(); ++k) {
        if (scores[k].eps < scores[best].eps) best = k;
      }
      if (!(scores[best].eps < cur_eps - kImprovement)) break;
      cur = next[best];
      cur_eps = scores[best].eps;
    }
    if (cur_eps <= p.eps) {
      cur.label = "descent";
      return cur;
    }
  }
  return std::nullopt;
}

Tables TablesOf(const Mechanism& mech) {
  return {mech.selection().left_table(), mech.selection().right_table(), ""};
}

void RunPatternSearch(const InnerProblem& p, const PatternSearchOptions& opt,
                      bool parallel, Runner& runner) {
  std::vector<Tables> seeds;
  if (p.layout.m() <= opt.max_lattice_m) seeds = LatticeSeeds(p.layout.m(), opt.lattice_step);
  for (Tables& t : ParametricSeeds(p.layout)) seeds.push_back(std::move(t));
  const std::vector<SeedScore> scores = ScoreSeeds(p, seeds, parallel);

  std::vector<size_t> order;
  for (size_t k = 0; k < seeds.size(); ++k) {
    if (scores[k].eps <= p.eps) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a].mae < scores[b].mae;
  });
  std::vector<Tables> starts;
  for (size_t k : order) starts.push_back(seeds[k]);
  if (starts.empty()) {
    size_t best = 0;
    for (size_t k = 1; k < seeds.size(); ++k) {
      if (scores[k].eps < scores[best].eps) best = k;
    }
    if (std::optional<Tables> t =
            DescendToTarget(p, seeds[best], scores[best].eps, parallel)) {
      starts.push_back(*t);
    }
  }

  int chains = 0;
  for (const Tables& seed : starts) {
    if (chains >= opt.chains) break;
    const std::string chain = "chain " + std::to_string(chains + 1);
    std::vector<PointOutcome> first = runner.Run(
        {{BandAround(seed, p.mode, opt.seed_band), chain + " seed " + seed.label}});
    if (!first[0].entry.feasible) continue;
    ++chains;
    Tables cur = TablesOf(*first[0].mechanism);
    double cur_obj = first[0].entry.objective;
    for (double h : opt.steps) {
      const double rel = opt.band_factor * h;
      for (int it = 0; it < opt.max_moves_per_step; ++it) {
        std::vector<GridPoint> points;
        points.push_back({BandAround(cur, p.mode, rel),
                          chain + " stay h=" + Fmt(h)});
        for (const Tables& t : Neighbors(cur, p.layout, p.mode, h)) {
          points.push_back({BandAround(t, p.mode, rel), chain + " " + t.label});
        }
        const std::vector<PointOutcome> outs = runner.Run(points);
        int best = -1;
        for (size_t k = 0; k < outs.size(); ++k) {
          if (!outs[k].entry.feasible) continue;
          if (best < 0 || outs[k].entry.objective < outs[best].entry.objective) {
            best = static_cast<int>(k);
          }
        }
        if (best < 0 || !(outs[best].entry.objective < cur_obj - kImprovement)) {
          break;
        }
        cur = TablesOf(*outs[best].mechanism);
        cur_obj = outs[best].entry.objective;
      }
    }
  }
}

std::vector<GridPoint> ReducedPoints(const InnerProblem& p,
                                     const ReducedGridOptions& opt) {
  const BinLayout& layout = p.layout;
  const int m = layout.m();
  const int s = layout.s();
  const int t = layout.t();
  if (p.family != ConstraintFamily::kReduced) {
    throw DomainError("reduced bound grid needs the reduced constraint family");
  }
  if (s < 2 || t < 2 || t > m - 1) {
    throw DomainError(
        "reduced constraints need delta > 0 and a bin inside [-c, c]");
  }
  const VariableMap vars(m, LpMode::kSymmetric);
  const BilinearTerm z = PointTerm(layout, vars, -layout.c(), s - 1);
  const BilinearTerm wt = PieceTerm(layout, vars, t - 1, layout.bin(t), 1);
  const BilinearTerm wc = PointTerm(layout, vars, layout.c(), 1);
  std::vector<const BilinearTerm*> lows = {&wt};
  if (wc.factor != wt.factor) lows.push_back(&wc);
  std::vector<double> scalars;
  for (int k = 0; k < opt.points; ++k) {
    scalars.push_back(opt.points == 1
                          ? opt.lo
                          : opt.lo * std::pow(opt.hi / opt.lo,
                                              static_cast<double>(k) / (opt.points - 1)));
  }
  const std::vector<double> uppers =
      z.factor_row == 1 ? std::vector<double>{1.0} : opt.upper_options;

  std::vector<GridPoint> points;
  std::vector<size_t> pick(lows.size(), 0);
  while (true) {
    for (double u : uppers) {
      TriangularTable lo(m - 1, kMinBound);
      TriangularTable hi(m - 1, 1.0);
      lo.at(1, 1) = 1.0;
      std::string label = "u=" + Fmt(u);
      hi.at(z.factor_row, z.factor_col) = u;
      bool ok = true;
      for (size_t k = 0; k < lows.size(); ++k) {
        const double o = scalars[pick[k]];
        lo.at(lows[k]->factor_row, lows[k]->factor_col) = o;
        label += " o" + std::to_string(k + 1) + "=" + Fmt(o);
      }
      for (int n = 1; n <= m - 1 && ok; ++n) {
        for (int i = 1; i <= n; ++i) {
          if (lo.at(n, i) > hi.at(n, i)) ok = false;
        }
      }
      if (ok) points.push_back({ProbBounds(lo, hi), label});
    }
    size_t k = lows.size();
    while (k > 0) {
      if (++pick[k - 1] < scalars.size()) break;
      pick[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return points;
}

std::string JoinBins(const std::vector<double>& bins) {
  std::string out;
  for (size_t k = 0; k < bins.size(); ++k) {
    if (k) out += ' ';
    out += Fmt(bins[k]);
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

BoundGrid BoundGrid::Explicit(std::vector<ProbBounds> bounds) {
  if (bounds.empty()) throw DomainError("bound grid must not be empty");
  BoundGrid g;
  g.kind = Kind::kExplicit;
  g.explicit_bounds = std::move(bounds);
  return g;
}

BoundGrid BoundGrid::PatternSearch(PatternSearchOptions options) {
  if (options.steps.empty() || options.chains < 1 || !(options.lattice_step > 0)) {
    throw DomainError("invalid pattern search options");
  }
  BoundGrid g;
  g.kind = Kind::kPatternSearch;
  g.pattern = std::move(options);
  return g;
}

BoundGrid BoundGrid::ReducedScalars(ReducedGridOptions options) {
  if (options.points < 1 || !(options.lo > 0) || options.hi < options.lo ||
      options.upper_options.empty()) {
    throw DomainError("invalid reduced grid options");
  }
  BoundGrid g;
  g.kind = Kind::kReducedScalars;
  g.reduced = std::move(options);
  return g;
}

BoundGrid BoundGrid::DefaultFor(ConstraintFamily family) {
  return family == ConstraintFamily::kReduced ? ReducedScalars() : PatternSearch();
}

std::vector<PointOutcome> EvaluateBoundsSerial(const InnerProblem& problem,
                                               const std::vector<GridPoint>& points) {
  std::vector<PointOutcome> outs;
  outs.reserve(points.size());
  for (const GridPoint& g : points) outs.push_back(EvaluatePoint(problem, g));
  return outs;
}

std::vector<PointOutcome> EvaluateBoundsParallel(
    const InnerProblem& problem, const std::vector<GridPoint>& points) {
  std::vector<PointOutcome> outs(points.size());
  const long n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) outs[k] = EvaluatePoint(problem, points[k]);
  return outs;
}

OptmResult OptmInner(const BinLayout& layout, double eps, const BoundGrid& grid,
                     const InputDistribution& dist, ConstraintFamily family,
                     LpMode mode, const OptimizerOptions& options) {
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  if (mode == LpMode::kSymmetric && !layout.symmetric()) {
    throw DomainError("symmetric mode requires symmetric bins");
  }
  if (family == ConstraintFamily::kReduced && mode != LpMode::kSymmetric) {
    throw DomainError("reduced constraints are only defined in symmetric mode");
  }
  InputDistribution objective_dist =
      options.objective_samples
          ? InputDistribution::IntervalMasses(
                layout, EstimateIntervalMasses(layout, *options.objective_samples))
          : dist;
  const InnerProblem problem{layout, eps, dist, std::move(objective_dist),
                             family, mode, options.build};
  OptmResult result;
  Runner runner(problem, options.parallel, result);
  switch (grid.kind) {
    case BoundGrid::Kind::kExplicit: {
      std::vector<GridPoint> points;
      for (size_t k = 0; k < grid.explicit_bounds.size(); ++k) {
        points.push_back({grid.explicit_bounds[k], "bounds " + std::to_string(k)});
      }
      runner.Run(points);
      break;
    }
    case BoundGrid::Kind::kReducedScalars:
      runner.Run(ReducedPoints(problem, grid.reduced));
      break;
    case BoundGrid::Kind::kPatternSearch:
      RunPatternSearch(problem, grid.pattern, options.parallel, runner);
      break;
  }
  if (!result.mechanism) {
    result.status = OptmStatus::kNoFeasible;
    result.message = kNoFeasibleMessage;
    result.winner_index = -1;
    return result;
  }
  const LeaderboardEntry& w = result.leaderboard[result.winner_index];
  result.status = OptmStatus::kOk;
  result.objective = w.objective;
  result.mae_bound = w.mae_bound;
  result.exact_mae = w.exact_mae;
  result.audit_eps = w.audit_eps;
  return result;
}

std::vector<double> DefaultDeltaOptions(double c) {
  std::vector<double> out;
  for (double f : {0.2, 0.5, 1.0, 1.5, 1.7, 2.0, 2.5, 3.0, 3.5, 4.1}) {
    out.push_back(f * c);
  }
  return out;
}

HyperGrid DefaultHyperGrid(ConstraintFamily family, LpMode mode) {
  HyperGrid h;
  h.delta_options = DefaultDeltaOptions(1.0);
  for (int k = 1; k <= 10; ++k) h.inner_scales.push_back(k / 10.0);
  if (mode == LpMode::kGeneral) {
    for (int k = -5; k <= 5; ++k) h.inner_positions.push_back(k / 5.0);
  }
  h.family = family;
  h.mode = mode;
  h.bounds = BoundGrid::DefaultFor(family);
  return h;
}

std::vector<BinLayout> LayoutsFor(double c, int m, const HyperGrid& hyper) {
  if (!hyper.explicit_layouts.empty()) return hyper.explicit_layouts;
  if (hyper.delta_options.empty() || hyper.inner_scales.empty()) {
    throw DomainError("hyper grid needs delta and inner-bin options");
  }
  if (m < 2 || m > kMaxBins) throw DomainError("m out of range");
  std::vector<BinLayout> out;
  auto add = [&](BinLayout layout) {
    if (std::find(out.begin(), out.end(), layout) == out.end()) {
      out.push_back(std::move(layout));
    }
  };
  if (!hyper.inner_positions.empty()) {
    std::vector<double> lattice = hyper.inner_positions;
    std::sort(lattice.begin(), lattice.end());
    lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());
    const int inner = m - 2;
    const int n = static_cast<int>(lattice.size());
    if (inner > n) throw DomainError("too few inner positions for m");
    for (double delta : hyper.delta_options) {
      std::vector<int> pick(inner);
      for (int k = 0; k < inner; ++k) pick[k] = k;
      while (true) {
        std::vector<double> bins = {-c - delta};
        for (int k : pick) bins.push_back(lattice[k] * c);
        bins.push_back(c + delta);
        add(BinLayout(c, delta, bins));
        int k = inner - 1;
        while (k >= 0 && pick[k] == n - inner + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int r = k + 1; r < inner; ++r) pick[r] = pick[r - 1] + 1;
      }
    }
    return out;
  }
  for (double delta : hyper.delta_options) {
    for (double a : hyper.inner_scales) {
      std::vector<double> bins = {-c - delta};
      if (m == 3) bins.push_back(0.0);
      for (int k = 0; m > 3 && k < m - 2; ++k) {
        bins.push_back(-a * c + 2 * a * c * k / (m - 3));
      }
      bins.push_back(c + delta);
      add(BinLayout(c, delta, bins));
    }
  }
  return out;
}

OptmResult OptmOuter(double c, int m, double eps, const HyperGrid& hyper,
                     const InputDistribution& dist,
                     const OptimizerOptions& options) {
  OptmResult best;
  best.status = OptmStatus::kNoFeasible;
  best.message = kNoFeasibleMessage;
  std::vector<LeaderboardEntry> board;
  int infeasible = 0;
  for (const BinLayout& layout : LayoutsFor(c, m, hyper)) {
    OptmResult r;
    try {
      r = OptmInner(layout, eps, hyper.bounds, dist, hyper.family, hyper.mode,
                    options);
    } catch (const DomainError& ex) {
      LeaderboardEntry e;
      e.bins = layout.bins();
      e.point = "layout";
      e.status = std::string("rejected: ") + ex.what();
      r.leaderboard.push_back(e);
      r.infeasible_points = 1;
    }
    const int offset = static_cast<int>(board.size());
    for (LeaderboardEntry& e : r.leaderboard) {
      e.index += offset;
      board.push_back(e);
    }
    infeasible += r.infeasible_points;
    if (r.status != OptmStatus::kOk) continue;
    if (best.status != OptmStatus::kOk || r.exact_mae < best.exact_mae) {
      best.status = OptmStatus::kOk;
      best.message.clear();
      best.mechanism = r.mechanism;
      best.objective = r.objective;
      best.mae_bound = r.mae_bound;
      best.exact_mae = r.exact_mae;
      best.audit_eps = r.audit_eps;
      best.winner_index = r.winner_index + offset;
    }
  }
  best.leaderboard = std::move(board);
  best.infeasible_points = infeasible;
  return best;
}

std::vector<double> DefaultRqmQOptions() {
  std::vector<double> out;
  for (int k = 1; k <= 199; ++k) out.push_back(k / 200.0);
  return out;
}

std::vector<double> DefaultErmGammaOptions() {
  std::vector<double> out;
  for (int k = 0; k < 200; ++k) out.push_back(1e-3 * std::pow(1e5, k / 199.0));
  return out;
}

namespace {

// Candidates are visited layout by layout; the smallest exact MAE among
// audited-valid ones wins, ties going to the earlier candidate.
FamilySearchResult SearchFamily(
    double eps, const std::vector<BinLayout>& layouts,
    const std::vector<double>& params, const InputDistribution& dist,
    const std::function<Mechanism(const BinLayout&, double)>& make,
    const std::function<double(const BinLayout&, double)>& bound) {
  FamilySearchResult best;
  for (const BinLayout& layout : layouts) {
    for (double param : params) {
      ++best.evaluated_points;
      const Mechanism mech = make(layout, param);
      const double audit = EmpiricalEpsilon(mech).eps_emp;
      if (audit > eps + kAuditSlack) continue;
      ++best.valid_points;
      const double mae = ExactMae(mech, dist);
      if (best.status == OptmStatus::kOk && !(mae < best.exact_mae)) continue;
      best.status = OptmStatus::kOk;
      best.mechanism = mech;
      best.parameter = param;
      best.delta = layout.delta();
      best.bins = layout.bins();
      best.exact_mae = mae;
      best.audit_eps = audit;
      best.analytic_bound = bound(layout, param);
    }
  }
  return best;
}

}  // namespace

FamilySearchResult SearchRqm(double c, int m, double eps,
                             const std::vector<double>& delta_options,
                             const std::vector<double>& q_options,
                             const InputDistribution& dist) {
  std::vector<BinLayout> layouts;
  for (double delta : delta_options) layouts.push_back(UniformBins(m, c, delta));
  return SearchFamily(
      eps, layouts, q_options, dist,
      [](const BinLayout& layout, double q) { return MakeRqm({q, layout}); },
      [](const BinLayout& layout, double q) {
        return layout.delta() > 0
                   ? RqmPrivacyBound(layout.m(), layout.c(), layout.delta(), q)
                   : std::numeric_limits<double>::infinity();
      });
}

FamilySearchResult SearchErm(double eps, const std::vector<BinLayout>& layouts,
                             const std::vector<double>& gamma_options,
                             const InputDistribution& dist) {
  return SearchFamily(
      eps, layouts, gamma_options, dist,
      [](const BinLayout& layout, double gamma) {
        return MakeErm({gamma, layout});
      },
      [](const BinLayout& layout, double gamma) {
        return ErmPrivacyBound(layout.m(), layout.c(), layout.delta(), gamma).value;
      });
}

std::string LeaderboardCsv(const std::vector<LeaderboardEntry>& entries) {
  std::ostringstream out;
  out << "index,bins,point,status,feasible,objective,mae_bound,exact_mae,"
         "audit_eps\n";
  for (const LeaderboardEntry& e : entries) {
    out << e.index << ',' << JoinBins(e.bins) << ',' << CsvField(e.point) << ','
        << CsvField(e.status) << ',' << (e.feasible ? 1 : 0) << ',';
    if (e.feasible) {
      out << Fmt(e.objective) << ',' << Fmt(e.mae_bound) << ','
          << Fmt(e.exact_mae) << ',' << Fmt(e.audit_eps);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dpq
