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
#include "dpq/mechanism.h"

#include <string>

#include "dpq/errors.h"

namespace dpq {
namespace {

// Draws an index 1..n from probs(1..n) by inverse CDF.
template <typename Prob>
int DrawIndex(int n, Prob prob, double u) {
  double acc = 0.0;
  for (int i = 1; i < n; ++i) {
    acc += prob(i);
    if (u < acc) return i;
  }
  return n;
}

double DitherUnchecked(double b_left, double b_right, double x, Rng& rng) {
  if (b_right == b_left) return b_left;
  const double p_right = (x - b_left) / (b_right - b_left);
  return Uniform01(rng) < p_right ? b_right : b_left;
}

}  // namespace

Mechanism::Mechanism(BinLayout layout, SelectionDistribution selection,
                     nlohmann::json metadata)
    : layout_(std::move(layout)),
      selection_(std::move(selection)),
      metadata_(std::move(metadata)) {
  if (selection_.m() != layout_.m()) {
    throw DomainError("selection tables are for m=" +
                      std::to_string(selection_.m()) + " but layout has m=" +
                      std::to_string(layout_.m()));
  }
}

int IntervalIndex(const BinLayout& layout, double x) {
  return layout.IntervalIndex(x);
}

double Dither(double b_left, double b_right, double x, Rng& rng) {
  if (!(b_left <= x) || !(x < b_right)) {
    throw ContractViolation("dither requires B_l <= x < B_r");
  }
  return DitherUnchecked(b_left, b_right, x, rng);
}

double Sample(const Mechanism& mech, double x, Rng& rng) {
  const BinLayout& layout = mech.layout();
  const SelectionDistribution& sel = mech.selection();
  const int m = layout.m();
  const int j = layout.IntervalIndex(x);
  const int l =
      DrawIndex(j, [&](int i) { return sel.left(j, i); }, Uniform01(rng));
  // Right row m - j indexes bins from the top: entry k is bin m + 1 - k.
  const int k = DrawIndex(
      m - j, [&](int i) { return sel.right(m - j, i); }, Uniform01(rng));
  const int r = m + 1 - k;
  // x = B_m only when delta = 0 and x = c; the dither is then degenerate.
  return DitherUnchecked(layout.bin(l), layout.bin(r), x, rng);
}

double PieceProbability(const Mechanism& mech, int j, double x, int i) {
  const BinLayout& layout = mech.layout();
  const SelectionDistribution& sel = mech.selection();
  const int m = layout.m();
  const double bi = layout.bin(i);
  double acc = 0.0;
  if (i <= j) {
    for (int r = j + 1; r <= m; ++r) {
      const double br = layout.bin(r);
      acc += sel.right(m - j, m - r + 1) * (br - x) / (br - bi);
    }
    return sel.left(j, i) * acc;
  }
  for (int l = 1; l <= j; ++l) {
    const double bl = layout.bin(l);
    acc += sel.left(j, l) * (x - bl) / (bi - bl);
  }
  return sel.right(m - j, m + 1 - i) * acc;
}

std::vector<double> PieceDistribution(const Mechanism& mech, int j, double x) {
  std::vector<double> p(mech.m());
  for (int i = 1; i <= mech.m(); ++i) p[i - 1] = PieceProbability(mech, j, x, i);
  return p;
}

std::vector<double> OutputDistribution(const Mechanism& mech, double x) {
  return PieceDistribution(mech, mech.layout().IntervalIndex(x), x);
}

std::vector<double> OutputDistributionLimit(const Mechanism& mech, int k,
                                            LimitSide side) {
  const BinLayout& layout = mech.layout();
  if (k < 1 || k > layout.m() || !layout.InDomain(k)) {
    throw DomainError("limit point B_" + std::to_string(k) +
                      " is not inside [-c, c]");
  }
  const double bk = layout.bin(k);
  if (side == LimitSide::kFromRight) return OutputDistribution(mech, bk);
  if (k == 1) {
    throw DomainError("no interval to the left of B_1");
  }
  return PieceDistribution(mech, k - 1, bk);
}

}  // namespace dpq
