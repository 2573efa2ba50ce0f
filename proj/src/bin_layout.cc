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
#include "dpq/bin_layout.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpq/errors.h"

namespace dpq {
namespace {

double Tolerance(double c, double delta) {
  return 1e-12 * std::max(1.0, c + delta);
}

}  // namespace

BinLayout::BinLayout(double c, double delta, std::vector<double> bins)
    : c_(c), delta_(delta), bins_(std::move(bins)) {
  if (!(c > 0) || !std::isfinite(c)) {
    throw DomainError("clip radius c must be positive and finite");
  }
  if (!(delta >= 0) || !std::isfinite(delta)) {
    throw DomainError("extension delta must be nonnegative and finite");
  }
  const int m = static_cast<int>(bins_.size());
  if (m < 2 || m > kMaxBins) {
    throw DomainError("number of bins must be in [2, " +
                      std::to_string(kMaxBins) + "], got " +
                      std::to_string(m));
  }
  for (int k = 1; k < m; ++k) {
    if (!(bins_[k] > bins_[k - 1])) {
      throw DomainError("bins must be strictly increasing (B_" +
                        std::to_string(k) + " >= B_" + std::to_string(k + 1) +
                        ")");
    }
  }
  const double tol = Tolerance(c, delta);
  if (std::abs(bins_.front() + c + delta) > tol ||
      std::abs(bins_.back() - c - delta) > tol) {
    throw DomainError("outer bins must equal -c-delta and c+delta");
  }
  for (int k = 1; k <= m; ++k) {
    if (InDomain(k)) {
      if (s_ == 0) s_ = k;
      t_ = k;
    }
  }
  symmetric_ = true;
  for (int k = 1; k <= m; ++k) {
    if (std::abs(bin(k) + bin(m + 1 - k)) > tol) symmetric_ = false;
  }
}

BinLayout BinLayout::FromBins(double c, std::vector<double> bins) {
  if (bins.empty()) throw DomainError("empty bin list");
  const double delta = bins.back() - c;
  return BinLayout(c, std::max(delta, 0.0), std::move(bins));
}

bool BinLayout::InDomain(int k) const {
  return bin(k) >= -c_ && bin(k) <= c_;
}

int BinLayout::IntervalIndex(double x) const {
  if (!(x >= -c_ && x <= c_)) {
    throw DomainError("input " + std::to_string(x) + " outside [-c, c]");
  }
  const auto it = std::upper_bound(bins_.begin(), bins_.end(), x);
  int j = static_cast<int>(it - bins_.begin());
  return std::min(j, m() - 1);
}

bool BinLayout::IntervalReachable(int j) const {
  return bin(j) <= c_ && bin(j + 1) > -c_;
}

std::vector<int> BinLayout::ReachableIntervals() const {
  std::vector<int> out;
  for (int j = 1; j < m(); ++j) {
    if (IntervalReachable(j)) out.push_back(j);
  }
  return out;
}

double BinLayout::ClippedLow(int j) const { return std::max(-c_, bin(j)); }

double BinLayout::ClippedHigh(int j) const {
  return std::min(c_, bin(j + 1));
}

bool BinLayout::operator==(const BinLayout& other) const {
  if (m() != other.m()) return false;
  const double tol = LayoutTolerance(*this);
  if (std::abs(c_ - other.c_) > tol) return false;
  for (int k = 1; k <= m(); ++k) {
    if (std::abs(bin(k) - other.bin(k)) > tol) return false;
  }
  return true;
}

double LayoutTolerance(const BinLayout& layout) {
  return Tolerance(layout.c(), layout.delta());
}

}  // namespace dpq
