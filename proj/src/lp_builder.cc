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

#include <algorithm>
#include <cmath>
#include <string>

#include "dpq/errors.h"
#include "dpq/format.h"

namespace dpq {
namespace {

constexpr double kBoundSumSlack = 1e-12;

std::string Entry(const char* name, int n, int i) {
  return std::string(name) + "(" + std::to_string(n) + "," +
         std::to_string(i) + ")";
}

LinearForm Unit(const VariableMap& vars, Family f, int n, int i) {
  LinearForm form(vars.size());
  form.coeffs[vars.Index(f, n, i)] = 1.0;
  return form;
}

LinearForm Scaled(const LinearForm& form, double s) {
  LinearForm out = form;
  for (double& v : out.coeffs) v *= s;
  out.constant *= s;
  return out;
}

LinearForm Freeze(const ProbBounds& bounds, const BilinearTerm& term,
                  bool upper) {
  const double v = upper ? bounds.u(term.factor_family, term.factor_row,
                                    term.factor_col)
                         : bounds.o(term.factor_family, term.factor_row,
                                    term.factor_col);
  return Scaled(term.form, v);
}

// up <= e^eps * low.
LpRow RatioRow(const LinearForm& up, const LinearForm& low, double e_eps,
               std::string label) {
  LpRow row;
  row.coeffs.resize(up.coeffs.size());
  for (size_t k = 0; k < up.coeffs.size(); ++k) {
    row.coeffs[k] = up.coeffs[k] - e_eps * low.coeffs[k];
  }
  row.relation = Relation::kLessEqual;
  row.rhs = -(up.constant - e_eps * low.constant);
  row.label = std::move(label);
  return row;
}

LpRow SingleVarRow(const VariableMap& vars, int index, Relation rel, double rhs,
                   std::string label) {
  LpRow row;
  row.coeffs.assign(vars.size(), 0.0);
  row.coeffs[index] = 1.0;
  row.relation = rel;
  row.rhs = rhs;
  row.label = std::move(label);
  return row;
}

// a - b <= 0 for two variables.
LpRow DifferenceRow(const VariableMap& vars, int a, double wa, int b, double wb,
                    std::string label) {
  LpRow row;
  row.coeffs.assign(vars.size(), 0.0);
  row.coeffs[a] += wa;
  row.coeffs[b] -= wb;
  row.relation = Relation::kLessEqual;
  row.rhs = 0.0;
  row.label = std::move(label);
  return row;
}

struct Labeled {
  LinearForm form;
  std::string label;
};

void AddPairs(const std::vector<Labeled>& ups, const std::vector<Labeled>& lows,
              double e_eps, int i, std::vector<LpRow>& rows) {
  for (const Labeled& up : ups) {
    for (const Labeled& low : lows) {
      rows.push_back(RatioRow(up.form, low.form, e_eps,
                              "priv bin " + std::to_string(i) + ": " +
                                  up.label + " <= e^eps " + low.label));
    }
  }
}

std::vector<int> DomainBins(const BinLayout& layout) {
  std::vector<int> out;
  for (int k = 1; k <= layout.m(); ++k) {
    if (layout.InDomain(k)) out.push_back(k);
  }
  return out;
}

// Rows of each family that some reachable input actually uses.
std::vector<int> UsedRows(const BinLayout& layout, Family f) {
  std::vector<int> rows;
  for (int j : layout.ReachableIntervals()) {
    rows.push_back(f == Family::kLeft ? j : layout.m() - j);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

std::vector<Family> Families(const VariableMap& vars) {
  if (vars.mode() == LpMode::kSymmetric) return {Family::kLeft};
  return {Family::kLeft, Family::kRight};
}

const char* FamilyPrefix(const VariableMap& vars, Family f) {
  if (vars.mode() == LpMode::kSymmetric) return "q";
  return f == Family::kLeft ? "ql" : "qr";
}

void AddBoxRows(const BinLayout& layout, const VariableMap& vars,
                const ProbBounds& bounds, std::vector<LpRow>& rows) {
  for (Family f : Families(vars)) {
    std::vector<int> used = UsedRows(layout, f);
    if (vars.mode() == LpMode::kSymmetric) {
      std::vector<int> mirrored = UsedRows(layout, Family::kRight);
      used.insert(used.end(), mirrored.begin(), mirrored.end());
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
    }
    for (int n : used) {
      double lo_sum = 0.0;
      double hi_sum = 0.0;
      for (int i = 1; i <= n; ++i) {
        lo_sum += bounds.o(f, n, i);
        hi_sum += bounds.u(f, n, i);
      }
      if (lo_sum > 1 + kBoundSumSlack || hi_sum < 1 - kBoundSumSlack) {
        throw DomainError(std::string("bounds for row ") + FamilyPrefix(vars, f) +
                          "_" + std::to_string(n) + " exclude every distribution"
                          " (sum o = " + ShortestDouble(lo_sum) +
                          ", sum u = " + ShortestDouble(hi_sum) + ")");
      }
      for (int i = 1; i <= n; ++i) {
        const int idx = vars.Index(f, n, i);
        const std::string name = Entry(FamilyPrefix(vars, f), n, i);
        rows.push_back(SingleVarRow(vars, idx, Relation::kGreaterEqual,
                                    bounds.o(f, n, i), "box " + name + " >= o"));
        rows.push_back(SingleVarRow(vars, idx, Relation::kLessEqual,
                                    bounds.u(f, n, i), "box " + name + " <= u"));
      }
    }
  }
}

// q_j(i) <= q_i(i) for all i < j, per family.
void AddDiagonalMonotonicity(const VariableMap& vars, std::vector<LpRow>& rows) {
  const int m = vars.m();
  for (Family f : Families(vars)) {
    for (int j = 2; j <= m - 1; ++j) {
      for (int i = 1; i < j; ++i) {
        rows.push_back(DifferenceRow(
            vars, vars.Index(f, j, i), 1.0, vars.Index(f, i, i), 1.0,
            "mono " + Entry(FamilyPrefix(vars, f), j, i) + " <= " +
                Entry(FamilyPrefix(vars, f), i, i)));
      }
    }
  }
}

// Candidate extrema of p(., i) for a bin left of -c: values at -c and at
// domain bins above; lower: left limits at those bins and the value at c.
void ExteriorLeftRows(const BinLayout& layout, const VariableMap& vars,
                      const ProbBounds& bounds, double e_eps, int i,
                      const std::vector<int>& domain, std::vector<LpRow>& rows) {
  const double c = layout.c();
  std::vector<Labeled> ups{{ZUpper(layout, vars, bounds, -c, i), "z(-c)"}};
  std::vector<Labeled> lows;
  for (int k : domain) {
    if (!(layout.bin(k) > -c)) continue;
    ups.push_back({ZUpper(layout, vars, bounds, layout.bin(k), i),
                   "z(B" + std::to_string(k) + ")"});
    lows.push_back({WLower(layout, vars, bounds, Anchor::LimitAt(k), i),
                    "w(lim B" + std::to_string(k) + ")"});
  }
  lows.push_back({WLower(layout, vars, bounds, Anchor::Edge(c), i), "w(c)"});
  AddPairs(ups, lows, e_eps, i, rows);
}

void FullSymmetricRows(const BinLayout& layout, const VariableMap& vars,
                       const ProbBounds& bounds, double e_eps,
                       std::vector<LpRow>& rows) {
  const int m = layout.m();
  const double c = layout.c();
  const std::vector<int> domain = DomainBins(layout);
  // Interior bins: diagonal entries against right-side lower anchors. The
  // left side of bin i is the mirror image of the right side of m + 1 - i.
  for (int i : domain) {
    std::vector<Labeled> ups;
    if (i <= m - 1) {
      ups.push_back({Unit(vars, Family::kLeft, i, i), Entry("q", i, i)});
    } else {
      ups.push_back({ZUpper(layout, vars, bounds, layout.bin(i), i), "z(B_m)"});
    }
    if (layout.bin(i) > -c && i >= 2) {
      ups.push_back({Unit(vars, Family::kRight, m + 1 - i, m + 1 - i),
                     Entry("q", m + 1 - i, m + 1 - i)});
    }
    std::vector<Labeled> lows;
    for (int k : domain) {
      if (layout.bin(k) > layout.bin(i)) {
        lows.push_back({WLower(layout, vars, bounds, Anchor::LimitAt(k), i),
                        "w(lim B" + std::to_string(k) + ")"});
      }
    }
    lows.push_back({WLower(layout, vars, bounds, Anchor::Edge(c), i), "w(c)"});
    AddPairs(ups, lows, e_eps, i, rows);
  }
  for (int i = 1; i <= m; ++i) {
    if (layout.bin(i) < -c) ExteriorLeftRows(layout, vars, bounds, e_eps, i, domain, rows);
  }
}

void FullGeneralRows(const BinLayout& layout, const VariableMap& vars,
                     const ProbBounds& bounds, double e_eps,
                     std::vector<LpRow>& rows) {
  const int m = layout.m();
  const double c = layout.c();
  const std::vector<int> domain = DomainBins(layout);
  for (int i = 1; i <= m; ++i) {
    const double bi = layout.bin(i);
    if (bi < -c) {
      ExteriorLeftRows(layout, vars, bounds, e_eps, i, domain, rows);
      continue;
    }
    std::vector<Labeled> ups;
    std::vector<Labeled> lows;
    if (bi > c) {
      ups.push_back({ZUpper(layout, vars, bounds, c, i), "z(c)"});
      for (int k : domain) {
        if (!(layout.bin(k) > -c)) continue;
        ups.push_back({Freeze(bounds,
                              PieceTerm(layout, vars, k - 1, layout.bin(k), i),
                              true),
                       "z(lim B" + std::to_string(k) + ")"});
      }
      lows.push_back({WLower(layout, vars, bounds, Anchor::Edge(-c), i), "w(-c)"});
      for (int k : domain) {
        lows.push_back({Freeze(bounds,
                               PointTerm(layout, vars, layout.bin(k), i), false),
                        "w(B" + std::to_string(k) + ")"});
      }
      AddPairs(ups, lows, e_eps, i, rows);
      continue;
    }
    if (i <= m - 1) {
      ups.push_back({Unit(vars, Family::kLeft, i, i), Entry("ql", i, i)});
    } else {
      ups.push_back({ZUpper(layout, vars, bounds, bi, i), "z(B_m)"});
    }
    if (bi > -c && i >= 2) {
      ups.push_back({Unit(vars, Family::kRight, m + 1 - i, m + 1 - i),
                     Entry("qr", m + 1 - i, m + 1 - i)});
    }
    if (bi > -c) {
      lows.push_back({WLower(layout, vars, bounds, Anchor::Edge(-c), i), "w(-c)"});
    }
    if (bi < c) {
      lows.push_back({WLower(layout, vars, bounds, Anchor::Edge(c), i), "w(c)"});
    }
    for (int k : domain) {
      const double bk = layout.bin(k);
      if (bk > bi) {
        lows.push_back({WLower(layout, vars, bounds, Anchor::LimitAt(k), i),
                        "w(lim B" + std::to_string(k) + ")"});
      } else if (bk < bi) {
        lows.push_back({Freeze(bounds, PointTerm(layout, vars, bk, i), false),
                        "w(B" + std::to_string(k) + ")"});
      }
    }
    AddPairs(ups, lows, e_eps, i, rows);
  }
}

void AddSimplexRows(const VariableMap& vars, std::vector<LpRow>& rows) {
  for (Family f : Families(vars)) {
    for (int n = 1; n <= vars.m() - 1; ++n) {
      LpRow row;
      row.coeffs.assign(vars.size(), 0.0);
      for (int i = 1; i <= n; ++i) row.coeffs[vars.Index(f, n, i)] = 1.0;
      row.relation = Relation::kEqual;
      row.rhs = 1.0;
      row.label = std::string("simplex ") + FamilyPrefix(vars, f) + "_" +
                  std::to_string(n);
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace

const char* LpModeName(LpMode mode) {
  return mode == LpMode::kSymmetric ? "symmetric" : "general";
}

const char* ConstraintFamilyName(ConstraintFamily family) {
  return family == ConstraintFamily::kFull ? "full" : "reduced";
}

VariableMap::VariableMap(int m, LpMode mode)
    : m_(m), mode_(mode), per_family_((m - 1) * m / 2) {
  if (m < 2 || m > kMaxBins) throw DomainError("invalid m for variable map");
}

int VariableMap::Index(Family family, int row, int col) const {
  const int base = TriangularTable::Offset(row, col);
  if (mode_ == LpMode::kGeneral && family == Family::kRight) {
    return per_family_ + base;
  }
  return base;
}

std::string VariableMap::Name(int index) const {
  const bool right = index >= per_family_;
  const int local = right ? index - per_family_ : index;
  int n = 1;
  while (TriangularTable::Offset(n + 1, 1) <= local) ++n;
  const int i = local - TriangularTable::Offset(n, 1) + 1;
  const char* prefix = mode_ == LpMode::kSymmetric ? "q" : (right ? "qr" : "ql");
  return Entry(prefix, n, i);
}

double LinearForm::Evaluate(const std::vector<double>& x) const {
  double acc = constant;
  for (size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * x[k];
  return acc;
}

ProbBounds::ProbBounds(TriangularTable lower, TriangularTable upper)
    : left_lower_(lower),
      left_upper_(upper),
      right_lower_(std::move(lower)),
      right_upper_(std::move(upper)) {
  Validate();
}

ProbBounds::ProbBounds(TriangularTable left_lower, TriangularTable left_upper,
                       TriangularTable right_lower,
                       TriangularTable right_upper)
    : left_lower_(std::move(left_lower)),
      left_upper_(std::move(left_upper)),
      right_lower_(std::move(right_lower)),
      right_upper_(std::move(right_upper)) {
  Validate();
}

ProbBounds ProbBounds::Constant(int m, double lower, double upper) {
  TriangularTable lo(m - 1, lower);
  TriangularTable hi(m - 1, upper);
  lo.at(1, 1) = 1.0;
  hi.at(1, 1) = 1.0;
  return ProbBounds(std::move(lo), std::move(hi));
}

ProbBounds ProbBounds::Band(const TriangularTable& left_center,
                            const TriangularTable& right_center, double rel) {
  auto band = [rel](const TriangularTable& center, TriangularTable& lo,
                    TriangularTable& hi) {
    lo = TriangularTable(center.rows());
    hi = TriangularTable(center.rows());
    for (int n = 1; n <= center.rows(); ++n) {
      for (int i = 1; i <= n; ++i) {
        const double q = std::clamp(center.at(n, i), 0.0, 1.0);
        lo.at(n, i) = std::max(kMinBound, q * (1 - rel));
        hi.at(n, i) = std::min(1.0, std::max(lo.at(n, i), q * (1 + rel)));
      }
    }
    lo.at(1, 1) = 1.0;
    hi.at(1, 1) = 1.0;
  };
  TriangularTable ll, lu, rl, ru;
  band(left_center, ll, lu);
  band(right_center, rl, ru);
  return ProbBounds(std::move(ll), std::move(lu), std::move(rl), std::move(ru));
}

double ProbBounds::o(Family f, int n, int i) const {
  return (f == Family::kLeft ? left_lower_ : right_lower_).at(n, i);
}

double ProbBounds::u(Family f, int n, int i) const {
  return (f == Family::kLeft ? left_upper_ : right_upper_).at(n, i);
}

const TriangularTable& ProbBounds::lower(Family f) const {
  return f == Family::kLeft ? left_lower_ : right_lower_;
}

const TriangularTable& ProbBounds::upper(Family f) const {
  return f == Family::kLeft ? left_upper_ : right_upper_;
}

void ProbBounds::Validate() const {
  const TriangularTable* pairs[2][2] = {{&left_lower_, &left_upper_},
                                        {&right_lower_, &right_upper_}};
  for (auto& pair : pairs) {
    const TriangularTable& lo = *pair[0];
    const TriangularTable& hi = *pair[1];
    if (lo.rows() != hi.rows() || lo.rows() < 1) {
      throw DomainError("bound tables have mismatched shapes");
    }
    for (int n = 1; n <= lo.rows(); ++n) {
      for (int i = 1; i <= n; ++i) {
        const double o = lo.at(n, i);
        const double u = hi.at(n, i);
        if (!(o > 0 && o <= u && u <= 1)) {
          throw DomainError("bounds need 0 < o <= u <= 1 at " + Entry("q", n, i) +
                            " (o=" + ShortestDouble(o) +
                            ", u=" + ShortestDouble(u) + ")");
        }
      }
    }
  }
  if (left_lower_.rows() != right_lower_.rows()) {
    throw DomainError("left and right bound tables differ in size");
  }
}

BilinearTerm PieceTerm(const BinLayout& layout, const VariableMap& vars, int j,
                       double x, int i) {
  const int m = layout.m();
  const double bi = layout.bin(i);
  BilinearTerm term;
  term.form = LinearForm(vars.size());
  if (i <= j) {
    term.factor_family = Family::kLeft;
    term.factor_row = j;
    term.factor_col = i;
    for (int r = j + 1; r <= m; ++r) {
      const double br = layout.bin(r);
      term.form.coeffs[vars.Index(Family::kRight, m - j, m - r + 1)] +=
          (br - x) / (br - bi);
    }
  } else {
    term.factor_family = Family::kRight;
    term.factor_row = m - j;
    term.factor_col = m + 1 - i;
    for (int l = 1; l <= j; ++l) {
      const double bl = layout.bin(l);
      term.form.coeffs[vars.Index(Family::kLeft, j, l)] += (x - bl) / (bi - bl);
    }
  }
  term.factor = vars.Index(term.factor_family, term.factor_row, term.factor_col);
  return term;
}

BilinearTerm PointTerm(const BinLayout& layout, const VariableMap& vars,
                       double x, int i) {
  return PieceTerm(layout, vars, layout.IntervalIndex(x), x, i);
}

LinearForm ZetaForm(const BinLayout& layout, const VariableMap& vars, int n) {
  LinearForm form(vars.size());
  if (n < 1 || n > layout.m()) throw DomainError("zeta index out of range");
  if (n == layout.m()) {
    // Row m does not exist; its coefficients would all multiply B_m - B_i
    // for a table no input selects.
    return form;
  }
  for (int i = 1; i <= n; ++i) {
    form.coeffs[vars.Index(Family::kLeft, n, i)] += layout.bin(n) - layout.bin(i);
  }
  return form;
}

LinearForm ZetaRightForm(const BinLayout& layout, const VariableMap& vars,
                         int j) {
  const int m = layout.m();
  LinearForm form(vars.size());
  for (int r = j + 1; r <= m; ++r) {
    form.coeffs[vars.Index(Family::kRight, m - j, m - r + 1)] +=
        layout.bin(r) - layout.bin(j + 1);
  }
  return form;
}

LinearForm ObjectiveUniform(const BinLayout& layout, const VariableMap& vars) {
  if (!layout.symmetric()) {
    throw DomainError("uniform objective requires symmetric bins");
  }
  const int m = layout.m();
  LinearForm obj(vars.size());
  for (int j : layout.ReachableIntervals()) {
    const double w = layout.ClippedWidth(j);
    const LinearForm a = ZetaForm(layout, vars, j);
    const LinearForm b = ZetaForm(layout, vars, m - j);
    for (int k = 0; k < vars.size(); ++k) obj.coeffs[k] += w * (a.coeffs[k] + b.coeffs[k]);
    obj.constant += w * (layout.bin(j + 1) - layout.bin(j));
  }
  return obj;
}

LinearForm ObjectiveGeneral(const BinLayout& layout,
                            const InputDistribution& dist,
                            const VariableMap& vars) {
  const std::vector<double> masses = dist.MassesFor(layout);
  LinearForm obj(vars.size());
  for (int j : layout.ReachableIntervals()) {
    const double w = masses[j - 1];
    if (w == 0.0) continue;
    const LinearForm a = ZetaForm(layout, vars, j);
    const LinearForm b = ZetaRightForm(layout, vars, j);
    for (int k = 0; k < vars.size(); ++k) obj.coeffs[k] += w * (a.coeffs[k] + b.coeffs[k]);
    obj.constant += w * (layout.bin(j + 1) - layout.bin(j));
  }
  return obj;
}

LinearForm ZUpper(const BinLayout& layout, const VariableMap& vars,
                  const ProbBounds& bounds, double x, int i) {
  return Freeze(bounds, PointTerm(layout, vars, x, i), true);
}

LinearForm WLower(const BinLayout& layout, const VariableMap& vars,
                  const ProbBounds& bounds, const Anchor& anchor, int i) {
  if (anchor.kind == Anchor::Kind::kEdge) {
    return Freeze(bounds, PointTerm(layout, vars, anchor.x, i), false);
  }
  const int k = anchor.k;
  if (!layout.InDomain(k)) throw DomainError("limit anchor outside [-c, c]");
  const double bk = layout.bin(k);
  if (layout.bin(i) <= bk) {
    if (k < 2) throw DomainError("no left limit at B_1");
    return Freeze(bounds, PieceTerm(layout, vars, k - 1, bk, i), false);
  }
  return Freeze(bounds, PointTerm(layout, vars, bk, i), false);
}

std::vector<LpRow> ConstraintsFull(const BinLayout& layout,
                                   const VariableMap& vars, double eps,
                                   const ProbBounds& bounds) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (vars.m() != layout.m()) throw DomainError("variable map size mismatch");
  const double e_eps = std::exp(eps);
  std::vector<LpRow> rows;
  if (vars.mode() == LpMode::kSymmetric) {
    if (!layout.symmetric()) {
      throw DomainError("symmetric mode requires symmetric bins");
    }
    FullSymmetricRows(layout, vars, bounds, e_eps, rows);
  } else {
    FullGeneralRows(layout, vars, bounds, e_eps, rows);
  }
  AddBoxRows(layout, vars, bounds, rows);
  AddDiagonalMonotonicity(vars, rows);
  return rows;
}

std::vector<LpRow> ConstraintsReduced(const BinLayout& layout,
                                      const VariableMap& vars, double eps,
                                      const ProbBounds& bounds,
                                      bool full_box) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (vars.mode() != LpMode::kSymmetric || !layout.symmetric()) {
    throw DomainError("reduced constraints require symmetric bins and mode");
  }
  const int m = layout.m();
  const int s = layout.s();
  const int t = layout.t();
  if (s < 2 || t > m - 1 || t < 2) {
    throw DomainError(
        "reduced constraints need delta > 0 and a bin inside [-c, c]");
  }
  const double e_eps = std::exp(eps);
  const double c = layout.c();
  std::vector<LpRow> rows;
  auto q = [&](int n, int i) { return vars.Index(Family::kLeft, n, i); };

  for (int j = 1; j <= m - 1; ++j) {
    for (int i = 1; i <= j; ++i) {
      if (j + 1 <= m - 1) {
        rows.push_back(DifferenceRow(vars, q(j + 1, i), 1.0, q(j, i), 1.0,
                                     "col " + Entry("q", j + 1, i) + " <= " +
                                         Entry("q", j, i)));
      }
      if (i + 1 <= j) {
        rows.push_back(DifferenceRow(vars, q(j, i), 1.0, q(j, i + 1), 1.0,
                                     "row " + Entry("q", j, i) + " <= " +
                                         Entry("q", j, i + 1)));
      }
    }
  }
  for (int i = s; i <= t; ++i) {
    if (i + 1 <= m - 1) {
      rows.push_back(DifferenceRow(vars, q(i + 1, i + 1), 1.0, q(i, i), 1.0,
                                   "diag " + Entry("q", i + 1, i + 1) + " <= " +
                                       Entry("q", i, i)));
    }
  }

  const BilinearTerm z_term = PointTerm(layout, vars, -c, s - 1);
  const BilinearTerm wt_term = PieceTerm(layout, vars, t - 1, layout.bin(t), 1);
  const BilinearTerm wc_term = PointTerm(layout, vars, c, 1);
  const std::vector<Labeled> ups{
      {Freeze(bounds, z_term, true), "z(-c,s-1)"},
      {Unit(vars, Family::kLeft, s, s), Entry("q", s, s)}};
  const std::vector<Labeled> lows{
      {Freeze(bounds, wt_term, false), "w(B_t,1)"},
      {Freeze(bounds, wc_term, false), "w(c,1)"}};
  AddPairs(ups, lows, e_eps, 0, rows);

  for (int k = s; k <= t; ++k) {
    for (int r = k + 2; r <= m; ++r) {
      const int col = m - r + 1;
      const double near = layout.bin(r) - layout.bin(k + 1);
      const double far = layout.bin(r) - layout.bin(k);
      if (m - k + 1 <= m - 1 && col <= m - k) {
        rows.push_back(DifferenceRow(vars, q(m - k, col), 1.0 / far,
                                     q(m - k + 1, col), 1.0 / near,
                                     "ratio k=" + std::to_string(k) +
                                         " r=" + std::to_string(r)));
      }
      if (m - k - 1 >= 1 && col <= m - k - 1) {
        rows.push_back(DifferenceRow(vars, q(m - k - 1, col), 1.0 / far,
                                     q(m - k, col), 1.0 / near,
                                     "ratio' k=" + std::to_string(k) +
                                         " r=" + std::to_string(r)));
      }
    }
  }

  // The frozen factors must respect the bounds they were frozen at.
  rows.push_back(SingleVarRow(vars, z_term.factor, Relation::kLessEqual,
                              bounds.u(z_term.factor_family, z_term.factor_row,
                                       z_term.factor_col),
                              "anchor box z(-c,s-1) factor <= u"));
  for (const BilinearTerm* term : {&wt_term, &wc_term}) {
    rows.push_back(SingleVarRow(vars, term->factor, Relation::kGreaterEqual,
                                bounds.o(term->factor_family, term->factor_row,
                                         term->factor_col),
                                "anchor box w factor >= o"));
  }
  if (full_box) AddBoxRows(layout, vars, bounds, rows);
  return rows;
}

LinearProgram BuildLp(const BinLayout& layout, double eps,
                      const ProbBounds& bounds, const InputDistribution& dist,
                      ConstraintFamily family, LpMode mode,
                      const BuildOptions& options) {
  if (mode == LpMode::kSymmetric && !layout.symmetric()) {
    throw DomainError("symmetric mode requires symmetric bins");
  }
  if (family == ConstraintFamily::kReduced && mode != LpMode::kSymmetric) {
    throw DomainError("reduced constraints are only defined in symmetric mode");
  }
  if (bounds.lower(Family::kLeft).rows() != layout.m() - 1) {
    throw DomainError("bound tables do not match the layout");
  }
  const VariableMap vars(layout.m(), mode);
  LinearProgram lp;
  lp.n_vars = vars.size();
  for (int k = 0; k < lp.n_vars; ++k) lp.var_names.push_back(vars.Name(k));
  LinearForm obj;
  if (mode == LpMode::kSymmetric &&
      dist.kind() == InputDistribution::Kind::kUniform) {
    obj = ObjectiveUniform(layout, vars);
    lp.bound_scale = 1.0 / (4 * layout.c());
  } else {
    obj = ObjectiveGeneral(layout, dist, vars);
    lp.bound_scale = 0.5;
  }
  lp.objective = obj.coeffs;
  lp.objective_constant = obj.constant;
  lp.constraints =
      family == ConstraintFamily::kFull
          ? ConstraintsFull(layout, vars, eps, bounds)
          : ConstraintsReduced(layout, vars, eps, bounds, options.reduced_full_box);
  AddSimplexRows(vars, lp.constraints);
  lp.lower.assign(lp.n_vars, 0.0);
  lp.upper.assign(lp.n_vars, 1.0);
  return lp;
}

Mechanism MechanismFromValues(const BinLayout& layout, const VariableMap& vars,
                              const std::vector<double>& values,
                              nlohmann::json metadata) {
  const int m = layout.m();
  auto table_for = [&](Family f) {
    TriangularTable table(m - 1);
    for (int n = 1; n <= m - 1; ++n) {
      double sum = 0.0;
      for (int i = 1; i <= n; ++i) {
        table.at(n, i) = std::clamp(values[vars.Index(f, n, i)], 0.0, 1.0);
        sum += table.at(n, i);
      }
      if (!(sum > 0)) throw DomainError("LP row with zero mass");
      for (int i = 1; i <= n; ++i) table.at(n, i) /= sum;
    }
    table.at(1, 1) = 1.0;
    return table;
  };
  if (vars.mode() == LpMode::kSymmetric) {
    return Mechanism(layout, SelectionDistribution::Symmetric(table_for(Family::kLeft)),
                     std::move(metadata));
  }
  return Mechanism(layout,
                   SelectionDistribution::TwoFamily(table_for(Family::kLeft),
                                                    table_for(Family::kRight)),
                   std::move(metadata));
}

std::vector<double> ValuesFromMechanism(const Mechanism& mech,
                                        const VariableMap& vars) {
  std::vector<double> values(vars.size(), 0.0);
  const int m = mech.m();
  for (int n = 1; n <= m - 1; ++n) {
    for (int i = 1; i <= n; ++i) {
      values[vars.Index(Family::kLeft, n, i)] = mech.selection().left(n, i);
      if (vars.mode() == LpMode::kGeneral) {
        values[vars.Index(Family::kRight, n, i)] = mech.selection().right(n, i);
      }
    }
  }
  return values;
}

}  // namespace dpq
