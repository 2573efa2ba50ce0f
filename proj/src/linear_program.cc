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
#include "dpq/linear_program.h"

#include <cmath>
#include <sstream>

#include "dpq/format.h"

namespace dpq {
namespace {

const char* RelationSymbol(Relation r) {
  switch (r) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kEqual:
      return "=";
    case Relation::kGreaterEqual:
      return ">=";
  }
  return "?";
}

// Sanitized identifier for the CPLEX format (no parentheses or commas).
std::string CplexName(int i) { return "x" + std::to_string(i); }

void AppendTerms(std::ostringstream& out, const std::vector<double>& coeffs) {
  bool first = true;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    const double a = coeffs[i];
    if (a == 0.0) continue;
    if (first) {
      if (a < 0) out << "- ";
    } else {
      out << (a < 0 ? " - " : " + ");
    }
    out <<ShortestDouble(std::abs(a)) << " " << CplexName(static_cast<int>(i));
    first = false;
  }
  if (first) out << "0 " << CplexName(0);
}

}  // namespace

std::string DumpLp(const LinearProgram& lp) {
  std::ostringstream out;
  out << "variables " << lp.n_vars << "\n";
  for (int i = 0; i < lp.n_vars; ++i) {
    out << "  " << i << " " << lp.var_names[i] << " ["
        << ShortestDouble(lp.lower[i]) << ", " << ShortestDouble(lp.upper[i])
        << "]\n";
  }
  out << "minimize " << FormatList(lp.objective) << " + "
      << ShortestDouble(lp.objective_constant) << "\n";
  out << "rows " << lp.NumRows() << "\n";
  for (int k = 0; k < lp.NumRows(); ++k) {
    const LpRow& row = lp.constraints[k];
    out << "  " << k << " " << row.label << ": " << FormatList(row.coeffs)
        << " " << RelationSymbol(row.relation) << " "
        << ShortestDouble(row.rhs) << "\n";
  }
  return out.str();
}

std::string DumpCplexLp(const LinearProgram& lp) {
  std::ostringstream out;
  out << "\\ variables: ";
  for (int i = 0; i < lp.n_vars; ++i) {
    out << (i ? ", " : "") << CplexName(i) << "=" << lp.var_names[i];
  }
  out << "\nMinimize\n obj: ";
  AppendTerms(out, lp.objective);
  out << "\nSubject To\n";
  for (int k = 0; k < lp.NumRows(); ++k) {
    const LpRow& row = lp.constraints[k];
    out << " r" << k << ": ";
    AppendTerms(out, row.coeffs);
    out << " " << RelationSymbol(row.relation) << " "
        << ShortestDouble(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int i = 0; i < lp.n_vars; ++i) {
    out << " " << ShortestDouble(lp.lower[i]) << " <= " << CplexName(i);
    if (std::isfinite(lp.upper[i])) out << " <= " << ShortestDouble(lp.upper[i]);
    out << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace dpq
