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
#ifndef DPQ_BIN_LAYOUT_H_
#define DPQ_BIN_LAYOUT_H_

#include <vector>

namespace dpq {

inline constexpr int kMaxBins = 64;

// Output alphabet B_1 < ... < B_m with B_1 = -c - delta and B_m = c + delta.
// Bin, interval and table indices throughout the library are 1-based so that
// they read the same as the usual B_k / q_j(i) notation.
class BinLayout {
 public:
  // Throws DomainError if the bins are not strictly increasing or do not span
  // [-c - delta, c + delta].
  BinLayout(double c, double delta, std::vector<double> bins);

  // Infers delta from the last bin.
  static BinLayout FromBins(double c, std::vector<double> bins);

  double c() const { return c_; }
  double delta() const { return delta_; }
  int m() const { return static_cast<int>(bins_.size()); }
  double bin(int k) const { return bins_[k - 1]; }
  const std::vector<double>& bins() const { return bins_; }

  // First and last bins inside [-c, c]; both 0 when no bin lies there.
  int s() const { return s_; }
  int t() const { return t_; }
  bool HasInteriorBins() const { return s_ > 0; }
  bool symmetric() const { return symmetric_; }

  // True when -c <= B_k <= c.
  bool InDomain(int k) const;

  // j with B_j <= x < B_{j+1}; x = c = B_m folds into m - 1.
  int IntervalIndex(double x) const;

  // Interval j = [B_j, B_{j+1}) intersects [-c, c].
  bool IntervalReachable(int j) const;
  std::vector<int> ReachableIntervals() const;

  // Endpoints of [B_j, B_{j+1}) clipped to [-c, c].
  double ClippedLow(int j) const;
  double ClippedHigh(int j) const;
  double ClippedWidth(int j) const { return ClippedHigh(j) - ClippedLow(j); }

  bool operator==(const BinLayout& other) const;

 private:
  double c_;
  double delta_;
  std::vector<double> bins_;
  int s_ = 0;
  int t_ = 0;
  bool symmetric_ = false;
};

// Tolerance used for layout equality and endpoint checks.
double LayoutTolerance(const BinLayout& layout);

}  // namespace dpq

#endif  // DPQ_BIN_LAYOUT_H_
