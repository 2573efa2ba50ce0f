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
#include "dpq/input_distribution.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dpq/errors.h"

namespace dpq {
namespace {

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

constexpr double kMassTolerance = 1e-9;

}  // namespace

InputDistribution InputDistribution::Uniform() { return InputDistribution(); }

InputDistribution InputDistribution::TruncatedGaussian(double mu,
                                                       double sigma) {
  if (!(sigma > 0) || !std::isfinite(mu)) {
    throw DomainError("truncated Gaussian needs finite mu and sigma > 0");
  }
  InputDistribution d;
  d.kind_ = Kind::kTruncatedGaussian;
  d.mu_ = mu;
  d.sigma_ = sigma;
  return d;
}

InputDistribution InputDistribution::IntervalMasses(
    const BinLayout& layout, std::vector<double> masses) {
  if (static_cast<int>(masses.size()) != layout.m() - 1) {
    throw DomainError("need one mass per interval");
  }
  double total = 0.0;
  for (int j = 1; j < layout.m(); ++j) {
    const double w = masses[j - 1];
    if (!(w >= 0)) throw DomainError("interval masses must be nonnegative");
    if (w > 0 && !layout.IntervalReachable(j)) {
      throw DomainError("mass assigned outside [-c, c]");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DomainError("interval masses must sum to 1");
  }
  InputDistribution d;
  d.kind_ = Kind::kIntervalMasses;
  d.aligned_layout_ = layout;
  d.masses_ = std::move(masses);
  return d;
}

std::vector<double> InputDistribution::MassesFor(
    const BinLayout& layout) const {
  const int m = layout.m();
  std::vector<double> out(m - 1, 0.0);
  switch (kind_) {
    case Kind::kUniform:
      for (int j : layout.ReachableIntervals()) {
        out[j - 1] = layout.ClippedWidth(j) / (2 * layout.c());
      }
      break;
    case Kind::kTruncatedGaussian: {
      const double c = layout.c();
      const double z = NormalCdf((c - mu_) / sigma_) -
                       NormalCdf((-c - mu_) / sigma_);
      if (!(z > 0)) throw DomainError("Gaussian has no mass on [-c, c]");
      for (int j : layout.ReachableIntervals()) {
        out[j - 1] = (NormalCdf((layout.ClippedHigh(j) - mu_) / sigma_) -
                      NormalCdf((layout.ClippedLow(j) - mu_) / sigma_)) /
                     z;
      }
      break;
    }
    case Kind::kIntervalMasses:
      if (!(*aligned_layout_ == layout)) {
        throw DomainError("interval masses are aligned to a different layout");
      }
      out = masses_;
      break;
  }
  return out;
}

double InputDistribution::Density(double x, double c) const {
  if (x < -c || x > c) return 0.0;
  if (kind_ == Kind::kUniform) return 1.0 / (2 * c);
  if (kind_ == Kind::kTruncatedGaussian) {
    const double z = NormalCdf((c - mu_) / sigma_) -
                     NormalCdf((-c - mu_) / sigma_);
    const double u = (x - mu_) / sigma_;
    return std::exp(-0.5 * u * u) /
           (sigma_ * std::sqrt(2 * std::numbers::pi) * z);
  }
  throw DomainError("interval masses have no density");
}

std::vector<double> EstimateIntervalMasses(const BinLayout& layout,
                                           const std::vector<double>& samples) {
  if (samples.empty()) throw DomainError("no samples");
  std::vector<double> counts(layout.m() - 1, 0.0);
  for (double x : samples) counts[layout.IntervalIndex(x) - 1] += 1.0;
  for (double& v : counts) v /= static_cast<double>(samples.size());
  return counts;
}

std::vector<double> SampleTruncatedGaussian(double mu, double sigma, double c,
                                            int n, Rng& rng) {
  std::normal_distribution<double> normal(mu, sigma);
  std::vector<double> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    const double x = normal(rng);
    if (x >= -c && x <= c) out.push_back(x);
  }
  return out;
}

}  // namespace dpq
