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
#include "dpq/mae.h"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace dpq {
namespace {

// sum_i p_j(x, i) |B_i - x|^power using the affine piece of interval j.
double PieceError(const Mechanism& mech, int j, double x, int power) {
  const BinLayout& layout = mech.layout();
  double acc = 0.0;
  for (int i = 1; i <= layout.m(); ++i) {
    const double d = std::abs(layout.bin(i) - x);
    acc += PieceProbability(mech, j, x, i) * (power == 1 ? d : d * d);
  }
  return acc;
}

// Simpson's rule; exact because the integrand has degree <= 3 on a piece.
double PieceAverage(const Mechanism& mech, int j, int power) {
  const BinLayout& layout = mech.layout();
  const double a = layout.ClippedLow(j);
  const double b = layout.ClippedHigh(j);
  return (PieceError(mech, j, a, power) +
          4 * PieceError(mech, j, 0.5 * (a + b), power) +
          PieceError(mech, j, b, power)) /
         6.0;
}

double ExpectedError(const Mechanism& mech, const InputDistribution& dist,
                     int power) {
  const BinLayout& layout = mech.layout();
  double total = 0.0;
  if (dist.kind() == InputDistribution::Kind::kTruncatedGaussian) {
    const double c = layout.c();
    for (int j : layout.ReachableIntervals()) {
      const double a = layout.ClippedLow(j);
      const double b = layout.ClippedHigh(j);
      if (!(b > a)) continue;
      total += boost::math::quadrature::gauss<double, 64>::integrate(
          [&](double x) {
            return PieceError(mech, j, x, power) * dist.Density(x, c);
          },
          a, b);
    }
    return total;
  }
  const std::vector<double> masses = dist.MassesFor(layout);
  for (int j : layout.ReachableIntervals()) {
    if (masses[j - 1] > 0) total += masses[j - 1] * PieceAverage(mech, j, power);
  }
  return total;
}

}  // namespace

double ConditionalMae(const Mechanism& mech, double x) {
  return PieceError(mech, mech.layout().IntervalIndex(x), x, 1);
}

double IntervalAverageMae(const Mechanism& mech, int j) {
  return PieceAverage(mech, j, 1);
}

double ExactMae(const Mechanism& mech, const InputDistribution& dist) {
  return ExpectedError(mech, dist, 1);
}

double ExactMse(const Mechanism& mech, const InputDistribution& dist) {
  return ExpectedError(mech, dist, 2);
}

double LeftZeta(const Mechanism& mech, int j) {
  const BinLayout& layout = mech.layout();
  double acc = 0.0;
  for (int i = 1; i <= j; ++i) {
    acc += mech.selection().LeftProb(j, i) * (layout.bin(j) - layout.bin(i));
  }
  return acc;
}

double RightZeta(const Mechanism& mech, int j) {
  const BinLayout& layout = mech.layout();
  double acc = 0.0;
  for (int r = j + 1; r <= layout.m(); ++r) {
    acc += mech.selection().RightProb(j, r) *
           (layout.bin(r) - layout.bin(j + 1));
  }
  return acc;
}

double MaeUpperBound(const Mechanism& mech, const InputDistribution& dist) {
  const BinLayout& layout = mech.layout();
  const std::vector<double> masses = dist.MassesFor(layout);
  double total = 0.0;
  for (int j : layout.ReachableIntervals()) {
    total += masses[j - 1] * 0.5 *
             (RightZeta(mech, j) + layout.bin(j + 1) - layout.bin(j) +
              LeftZeta(mech, j));
  }
  return total;
}

}  // namespace dpq
