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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dpq/format.h"

namespace dpq {
namespace {

constexpr double kMonotoneSlack = 1e-12;

std::vector<double> EvaluateAll(const Mechanism& mech, const Witness& w) {
  if (w.kind == Witness::Kind::kLeftLimit) {
    return OutputDistributionLimit(mech, w.limit_bin, LimitSide::kFromLeft);
  }
  return OutputDistribution(mech, w.x);
}

// Fills in probabilities and returns the index of the first max (or min).
size_t Extreme(std::vector<Witness>& ws, const std::vector<double>& probs,
               bool want_max) {
  size_t best = 0;
  for (size_t k = 0; k < ws.size(); ++k) {
    ws[k].probability = probs[k];
    if (want_max ? probs[k] > probs[best] : probs[k] < probs[best]) best = k;
  }
  return best;
}

void Finalize(AuditReport& report) {
  report.eps_emp = 0.0;
  report.worst_bin = 0;
  double worst = -1.0;
  for (const BinExtrema& b : report.bins) {
    double eps;
    if (b.min.probability <= 0.0) {
      eps = std::numeric_limits<double>::infinity();
    } else {
      eps = std::max(0.0, std::log(b.max.probability / b.min.probability));
    }
    if (eps > worst) {
      worst = eps;
      report.worst_bin = b.bin;
    }
  }
  report.eps_emp = std::max(worst, 0.0);
}

// Rows of p over grid points, one row per point.
std::vector<double> EvaluateGridSerial(const Mechanism& mech,
                                       const std::vector<Witness>& points) {
  const int m = mech.m();
  std::vector<double> p(points.size() * m);
  for (size_t g = 0; g < points.size(); ++g) {
    const std::vector<double> row = EvaluateAll(mech, points[g]);
    std::copy(row.begin(), row.end(), p.begin() + g * m);
  }
  return p;
}

std::vector<double> EvaluateGridParallel(const Mechanism& mech,
                                         const std::vector<Witness>& points) {
  const int m = mech.m();
  const long n = static_cast<long>(points.size());
  std::vector<double> p(points.size() * m);
#pragma omp parallel for schedule(static)
  for (long g = 0; g < n; ++g) {
    const std::vector<double> row = EvaluateAll(mech, points[g]);
    std::copy(row.begin(), row.end(), p.begin() + g * m);
  }
  return p;
}

AuditReport ReduceGrid(const Mechanism& mech, const std::vector<Witness>& points,
                       const std::vector<double>& p) {
  const int m = mech.m();
  AuditReport report;
  report.method = AuditMethod::kDenseGrid;
  report.monotonicity_assumption_held = MonotonicityHolds(mech);
  for (int i = 1; i <= m; ++i) {
    size_t hi = 0;
    size_t lo = 0;
    for (size_t g = 1; g < points.size(); ++g) {
      const double v = p[g * m + i - 1];
      if (v > p[hi * m + i - 1]) hi = g;
      if (v < p[lo * m + i - 1]) lo = g;
    }
    BinExtrema b;
    b.bin = i;
    b.max = points[hi];
    b.max.probability = p[hi * m + i - 1];
    b.min = points[lo];
    b.min.probability = p[lo * m + i - 1];
    report.bins.push_back(b);
  }
  Finalize(report);
  return report;
}

nlohmann::json WitnessToJson(const Witness& w) {
  nlohmann::json j;
  j["probability"] = w.probability;
  j["x"] = w.x;
  j["kind"] = w.kind == Witness::Kind::kValue ? "value" : "left_limit";
  if (w.kind == Witness::Kind::kLeftLimit) j["limit_bin"] = w.limit_bin;
  return j;
}

std::string WitnessLabel(const Witness& w) {
  if (w.kind == Witness::Kind::kLeftLimit) {
    return "lim x->B" + std::to_string(w.limit_bin) + "-";
  }
  return "x=" + ShortestDouble(w.x);
}

}  // namespace

double EvaluateWitness(const Mechanism& mech, const Witness& w, int i) {
  return EvaluateAll(mech, w)[i - 1];
}

namespace {

// Witnesses that contain the extrema of p(., i) for a monotone mechanism,
// without probabilities.
CandidateSets CandidateWitnesses(const BinLayout& layout, int i) {
  const double c = layout.c();
  const double bi = layout.bin(i);
  std::vector<int> domain;
  for (int k = 1; k <= layout.m(); ++k) {
    if (layout.InDomain(k)) domain.push_back(k);
  }
  CandidateSets sets;
  auto value = [&](std::vector<Witness>& out, double x) {
    out.push_back(Witness::Value(x));
  };
  auto limit = [&](std::vector<Witness>& out, int k) {
    out.push_back(Witness::LeftLimit(layout.bin(k), k));
  };
  if (bi < -c) {
    value(sets.upper, -c);
    for (int k : domain) value(sets.upper, layout.bin(k));
    value(sets.lower, c);
    for (int k : domain) {
      if (layout.bin(k) > -c) limit(sets.lower, k);
    }
  } else if (bi > c) {
    value(sets.upper, c);
    for (int k : domain) {
      if (layout.bin(k) > -c) limit(sets.upper, k);
    }
    value(sets.lower, -c);
    for (int k : domain) value(sets.lower, layout.bin(k));
  } else {
    value(sets.upper, bi);
    if (bi > -c) limit(sets.upper, i);
    value(sets.lower, -c);
    value(sets.lower, c);
    for (int k : domain) {
      const double bk = layout.bin(k);
      if (bk > bi) {
        limit(sets.lower, k);
      } else if (bk < bi) {
        value(sets.lower, bk);
      }
    }
  }
  return sets;
}

bool SameWitness(const Witness& a, const Witness& b) {
  return a.kind == b.kind && a.x == b.x && a.limit_bin == b.limit_bin;
}

}  // namespace

CandidateSets CandidateSetsFor(const Mechanism& mech, int i) {
  CandidateSets sets = CandidateWitnesses(mech.layout(), i);
  for (Witness& w : sets.upper) w.probability = EvaluateWitness(mech, w, i);
  for (Witness& w : sets.lower) w.probability = EvaluateWitness(mech, w, i);
  return sets;
}

bool MonotonicityHolds(const Mechanism& mech) {
  const BinLayout& layout = mech.layout();
  const SelectionDistribution& sel = mech.selection();
  const int m = layout.m();
  for (int j : layout.ReachableIntervals()) {
    for (int i = 1; i <= j; ++i) {
      if (layout.InDomain(i) && sel.left(j, i) > sel.left(i, i) + kMonotoneSlack) {
        return false;
      }
    }
    // Right row m - j, column k stands for bin m + 1 - k.
    const int n = m - j;
    for (int k = 1; k <= n; ++k) {
      if (layout.InDomain(m + 1 - k) &&
          sel.right(n, k) > sel.right(k, k) + kMonotoneSlack) {
        return false;
      }
    }
  }
  return true;
}

const char* AuditMethodName(AuditMethod method) {
  return method == AuditMethod::kCandidateSets ? "candidate_sets" : "dense_grid";
}

AuditReport EmpiricalEpsilon(const Mechanism& mech) {
  if (!MonotonicityHolds(mech)) return DenseGridAuditParallel(mech);
  AuditReport report;
  report.method = AuditMethod::kCandidateSets;
  report.monotonicity_assumption_held = true;
  // Every candidate is one of these points; evaluate each once.
  const BinLayout& layout = mech.layout();
  std::vector<Witness> points = {Witness::Value(-layout.c()),
                                 Witness::Value(layout.c())};
  for (int k = 1; k <= layout.m(); ++k) {
    if (!layout.InDomain(k)) continue;
    points.push_back(Witness::Value(layout.bin(k)));
    if (layout.bin(k) > -layout.c()) {
      points.push_back(Witness::LeftLimit(layout.bin(k), k));
    }
  }
  std::vector<std::vector<double>> dists;
  for (const Witness& w : points) dists.push_back(EvaluateAll(mech, w));
  auto lookup = [&](const Witness& w, int i) {
    for (size_t k = 0; k < points.size(); ++k) {
      if (SameWitness(points[k], w)) return dists[k][i - 1];
    }
    return EvaluateWitness(mech, w, i);
  };
  for (int i = 1; i <= mech.m(); ++i) {
    CandidateSets sets = CandidateWitnesses(layout, i);
    std::vector<double> up;
    std::vector<double> low;
    for (const Witness& w : sets.upper) up.push_back(lookup(w, i));
    for (const Witness& w : sets.lower) low.push_back(lookup(w, i));
    BinExtrema b;
    b.bin = i;
    b.max = sets.upper[Extreme(sets.upper, up, true)];
    b.min = sets.lower[Extreme(sets.lower, low, false)];
    report.bins.push_back(b);
  }
  Finalize(report);
  return report;
}

double BreakpointEpsilon(const Mechanism& mech) {
  const BinLayout& layout = mech.layout();
  const int m = layout.m();
  std::vector<double> hi(m, -1.0);
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  auto take = [&](const std::vector<double>& p) {
    for (int i = 0; i < m; ++i) {
      hi[i] = std::max(hi[i], p[i]);
      lo[i] = std::min(lo[i], p[i]);
    }
  };
  take(OutputDistribution(mech, -layout.c()));
  take(OutputDistribution(mech, layout.c()));
  for (int k = 1; k <= m; ++k) {
    if (!layout.InDomain(k)) continue;
    take(OutputDistribution(mech, layout.bin(k)));
    if (layout.bin(k) > -layout.c()) {
      take(OutputDistributionLimit(mech, k, LimitSide::kFromLeft));
    }
  }
  double eps = 0.0;
  for (int i = 0; i < m; ++i) {
    if (lo[i] <= 0.0) return std::numeric_limits<double>::infinity();
    eps = std::max(eps, std::log(hi[i] / lo[i]));
  }
  return eps;
}

std::vector<Witness> DenseGridPoints(const Mechanism& mech,
                                     double step_fraction) {
  const BinLayout& layout = mech.layout();
  const double c = layout.c();
  const long n = std::lround(1.0 / step_fraction);
  std::vector<Witness> points;
  points.reserve(n + 1 + 2 * layout.m());
  for (long g = 0; g <= n; ++g) {
    points.push_back(Witness::Value(std::min(c, -c + 2 * c * g / n)));
  }
  points.push_back(Witness::Value(-c));
  points.push_back(Witness::Value(c));
  for (int k = 1; k <= layout.m(); ++k) {
    if (!layout.InDomain(k)) continue;
    points.push_back(Witness::Value(layout.bin(k)));
    if (layout.bin(k) > -c) {
      points.push_back(Witness::LeftLimit(layout.bin(k), k));
    }
  }
  return points;
}

AuditReport DenseGridAuditSerial(const Mechanism& mech, double step_fraction) {
  const std::vector<Witness> points = DenseGridPoints(mech, step_fraction);
  return ReduceGrid(mech, points, EvaluateGridSerial(mech, points));
}

AuditReport DenseGridAuditParallel(const Mechanism& mech, double step_fraction) {
  const std::vector<Witness> points = DenseGridPoints(mech, step_fraction);
  return ReduceGrid(mech, points, EvaluateGridParallel(mech, points));
}

Verification VerifyMechanism(const Mechanism& mech, double eps_target) {
  Verification v;
  v.report = EmpiricalEpsilon(mech);
  v.passed = v.report.eps_emp <= eps_target + kAuditSlack;
  return v;
}

nlohmann::json AuditReportToJson(const AuditReport& report) {
  nlohmann::json j;
  if (std::isinf(report.eps_emp)) {
    j["eps_emp"] = "inf";
  } else {
    j["eps_emp"] = report.eps_emp;
  }
  j["worst_bin"] = report.worst_bin;
  j["method"] = AuditMethodName(report.method);
  j["monotonicity_assumption_held"] = report.monotonicity_assumption_held;
  nlohmann::json bins = nlohmann::json::array();
  for (const BinExtrema& b : report.bins) {
    bins.push_back({{"bin", b.bin},
                    {"max", WitnessToJson(b.max)},
                    {"min", WitnessToJson(b.min)}});
  }
  j["bins"] = std::move(bins);
  return j;
}

std::string FormatAuditReport(const AuditReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%4s  %-14s %-18s %-14s %-18s %s\n", "bin",
                "max p", "at", "min p", "at", "ln(max/min)");
  out += line;
  for (const BinExtrema& b : report.bins) {
    const double ratio = b.min.probability > 0
                             ? std::log(b.max.probability / b.min.probability)
                             : std::numeric_limits<double>::infinity();
    std::snprintf(line, sizeof(line), "%4d  %-14.8g %-18s %-14.8g %-18s %.8g\n",
                  b.bin, b.max.probability, WitnessLabel(b.max).c_str(),
                  b.min.probability, WitnessLabel(b.min).c_str(), ratio);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "eps_emp = %.10g (worst bin %d, method %s, monotone %s)\n",
                report.eps_emp, report.worst_bin, AuditMethodName(report.method),
                report.monotonicity_assumption_held ? "yes" : "no");
  out += line;
  return out;
}

}  // namespace dpq
