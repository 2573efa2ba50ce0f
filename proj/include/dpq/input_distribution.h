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
#ifndef DPQ_INPUT_DISTRIBUTION_H_
#define DPQ_INPUT_DISTRIBUTION_H_

#include <optional>
#include <vector>

#include "dpq/bin_layout.h"
#include "dpq/random.h"

namespace dpq {

// Law of the input X over [-c, c].
class InputDistribution {
 public:
  enum class Kind { kUniform, kTruncatedGaussian, kIntervalMasses };

  static InputDistribution Uniform();
  // Gaussian N(mu, sigma^2) conditioned on [-c, c] of whichever layout it is
  // evaluated against.
  static InputDistribution TruncatedGaussian(double mu, double sigma);
  // masses[j - 1] = Pr(X in [B_j, B_{j+1}) clipped to [-c, c]).
  static InputDistribution IntervalMasses(const BinLayout& layout,
                                          std::vector<double> masses);

  Kind kind() const { return kind_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  // Per-interval masses for the given layout (index j - 1). Throws
  // DomainError when an interval_masses law is evaluated on another layout.
  std::vector<double> MassesFor(const BinLayout& layout) const;

  // Density on [-c, c]; only meaningful for the continuous kinds.
  double Density(double x, double c) const;

 private:
  Kind kind_ = Kind::kUniform;
  double mu_ = 0.0;
  double sigma_ = 1.0;
  std::optional<BinLayout> aligned_layout_;
  std::vector<double> masses_;
};

// Empirical interval masses of samples (all inside [-c, c]).
std::vector<double> EstimateIntervalMasses(const BinLayout& layout,
                                           const std::vector<double>& samples);

// n draws from N(mu, sigma^2) restricted to [-c, c] by rejection.
std::vector<double> SampleTruncatedGaussian(double mu, double sigma, double c,
                                            int n, Rng& rng);

}  // namespace dpq

#endif  // DPQ_INPUT_DISTRIBUTION_H_
