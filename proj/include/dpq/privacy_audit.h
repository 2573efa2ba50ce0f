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
#ifndef DPQ_PRIVACY_AUDIT_H_
#define DPQ_PRIVACY_AUDIT_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpq/mechanism.h"

namespace dpq {

// A point where p(., i) is evaluated: either the value at x or the left
// limit at bin B_k (x = B_k).
struct Witness {
  enum class Kind { kValue, kLeftLimit };
  Kind kind = Kind::kValue;
  double x = 0.0;
  int limit_bin = 0;  // k for kLeftLimit
  double probability = 0.0;

  static Witness Value(double x) { return {Kind::kValue, x, 0, 0.0}; }
  static Witness LeftLimit(double x, int k) {
    return {Kind::kLeftLimit, x, k, 0.0};
  }
};

// Recomputes p(witness, i) from the mechanism.
double EvaluateWitness(const Mechanism& mech, const Witness& w, int i);

// Finite candidate sets whose max is sup_x p(x, i) and whose min is
// inf_x p(x, i), provided MonotonicityHolds(mech).
struct CandidateSets {
  std::vector<Witness> upper;
  std::vector<Witness> lower;
};
CandidateSets CandidateSetsFor(const Mechanism& mech, int i);

// q^l_j(i) <= q^l_i(i) for every reachable row j >= i and bin i in [-c, c],
// and the mirrored condition for the right family.
bool MonotonicityHolds(const Mechanism& mech);

struct BinExtrema {
  int bin = 0;
  Witness max;
  Witness min;
};

enum class AuditMethod { kCandidateSets, kDenseGrid };
const char* AuditMethodName(AuditMethod method);

struct AuditReport {
  // +inf when some bin has zero probability somewhere on [-c, c].
  double eps_emp = 0.0;
  int worst_bin = 0;
  std::vector<BinExtrema> bins;
  AuditMethod method = AuditMethod::kCandidateSets;
  bool monotonicity_assumption_held = true;
};

// Candidate sets when the monotonicity check passes, dense grid otherwise.
AuditReport EmpiricalEpsilon(const Mechanism& mech);

// ln(max/min) of p over every edge value, bin value and left limit at a bin.
// p(., i) is affine between consecutive breakpoints, so this is exact for
// any mechanism, monotone or not; it skips witness bookkeeping.
double BreakpointEpsilon(const Mechanism& mech);

// Grid of step step_fraction * 2c plus both one-sided values at every bin
// inside the domain and the two edges.
inline constexpr double kDenseGridStep = 1e-4;
std::vector<Witness> DenseGridPoints(const Mechanism& mech,
                                     double step_fraction = kDenseGridStep);
AuditReport DenseGridAuditSerial(const Mechanism& mech,
                                 double step_fraction = kDenseGridStep);
AuditReport DenseGridAuditParallel(const Mechanism& mech,
                                   double step_fraction = kDenseGridStep);

inline constexpr double kAuditSlack = 1e-6;

struct Verification {
  bool passed = false;
  AuditReport report;
};
// passed iff eps_emp <= eps_target + kAuditSlack.
Verification VerifyMechanism(const Mechanism& mech, double eps_target);

nlohmann::json AuditReportToJson(const AuditReport& report);
// Fixed-width table: bin, max (witness), min (witness), ln ratio.
std::string FormatAuditReport(const AuditReport& report);

}  // namespace dpq

#endif  // DPQ_PRIVACY_AUDIT_H_
