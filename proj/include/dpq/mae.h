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
#ifndef DPQ_MAE_H_
#define DPQ_MAE_H_

#include "dpq/input_distribution.h"
#include "dpq/mechanism.h"

namespace dpq {

// E|M(x) - x| for a fixed input.
double ConditionalMae(const Mechanism& mech, double x);

// Average of E|M(x) - x| over interval j clipped to [-c, c]. The integrand is
// quadratic on the interval, so Simpson's rule is exact.
double IntervalAverageMae(const Mechanism& mech, int j);

// E_X E|M(X) - X|: closed form for uniform inputs, 64-node Gauss-Legendre per
// interval for the truncated Gaussian, and a uniform conditional law inside
// each interval for interval masses.
double ExactMae(const Mechanism& mech, const InputDistribution& dist);

// Expected squared error E_X E(M(X) - X)^2 under the same rules.
double ExactMse(const Mechanism& mech, const InputDistribution& dist);

// Per-interval distance bounds: zeta^l_j = sum_i Pr{L_j = i}(B_j - B_i) and
// zeta^r_j = sum_r Pr{R_j = r}(B_r - B_{j+1}).
double LeftZeta(const Mechanism& mech, int j);
double RightZeta(const Mechanism& mech, int j);

// E over intervals of (zeta^r_j + (B_{j+1} - B_j) + zeta^l_j) / 2; dominates
// ExactMae for every mechanism.
double MaeUpperBound(const Mechanism& mech, const InputDistribution& dist);

}  // namespace dpq

#endif  // DPQ_MAE_H_
