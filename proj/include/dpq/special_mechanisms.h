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
#ifndef DPQ_SPECIAL_MECHANISMS_H_
#define DPQ_SPECIAL_MECHANISMS_H_

#include <string>

#include "dpq/bin_layout.h"
#include "dpq/mechanism.h"
#include "dpq/selection_distribution.h"

namespace dpq {

// B_i = -delta - c + (i - 1)(2c + 2 delta)/(m - 1).
BinLayout UniformBins(int m, double c, double delta);

// Geometric selection: q_j(1) = (1-q)^{j-1}, q_j(i) = q(1-q)^{j-i} for i > 1.
SelectionDistribution RqmSelection(int m, double q);

// Exponential selection q_j(i) proportional to
// exp{gamma (B_i - B_j) / (2 (B_j - B_1))}; row 1 is q_1(1) = 1.
SelectionDistribution ErmSelection(const BinLayout& layout, double gamma);

struct ErmParams {
  double gamma;
  BinLayout layout;
};

struct RqmParams {
  double q;
  BinLayout layout;  // must be uniformly spaced
};

Mechanism MakeErm(const ErmParams& params);
Mechanism MakeRqm(const RqmParams& params);

// Analytic bound plus whether the assumptions of its proof hold.
struct BoundValue {
  double value;
  bool assumption_satisfied;
  std::string note;
};

// gamma + ln(2 m (c + delta) / c); the proof assumes m >= 4 and uniform bins.
BoundValue ErmPrivacyBound(int m, double c, double delta, double gamma);

// (4 / gamma) ln(m) (c + delta) + (2c + 2 delta)/(m - 1).
double ErmErrorBound(int m, double c, double delta, double gamma);

// ln(2 (1-q)^2 (c + delta) / delta) + m ln(1 / (1 - q)); delta must be > 0.
double RqmPrivacyBound(int m, double c, double delta, double q);

}  // namespace dpq

#endif  // DPQ_SPECIAL_MECHANISMS_H_
