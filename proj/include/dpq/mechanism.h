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
#ifndef DPQ_MECHANISM_H_
#define DPQ_MECHANISM_H_

#include <vector>

#include <nlohmann/json.hpp>

#include "dpq/bin_layout.h"
#include "dpq/random.h"
#include "dpq/selection_distribution.h"

namespace dpq {

// A bin layout paired with its selection laws: the complete randomized
// quantizer. Immutable after construction.
class Mechanism {
 public:
  Mechanism(BinLayout layout, SelectionDistribution selection,
            nlohmann::json metadata = nlohmann::json::object());

  const BinLayout& layout() const { return layout_; }
  const SelectionDistribution& selection() const { return selection_; }
  const nlohmann::json& metadata() const { return metadata_; }
  int m() const { return layout_.m(); }

 private:
  BinLayout layout_;
  SelectionDistribution selection_;
  nlohmann::json metadata_;
};

enum class LimitSide { kFromLeft, kFromRight };

int IntervalIndex(const BinLayout& layout, double x);

// Outputs B_l with probability (B_r - x) / (B_r - B_l), else B_r.
// Requires B_l <= x < B_r.
double Dither(double b_left, double b_right, double x, Rng& rng);

// One draw of the quantizer at x in [-c, c].
double Sample(const Mechanism& mech, double x, Rng& rng);

// p(x, i) for i = 1..m (returned 0-based).
std::vector<double> OutputDistribution(const Mechanism& mech, double x);

// One-sided limit of p(., i) at B_k. kFromLeft uses the piece on
// [B_{k-1}, B_k); kFromRight equals p(B_k, .).
std::vector<double> OutputDistributionLimit(const Mechanism& mech, int k,
                                            LimitSide side);

// The affine piece of p(., i) that is valid on interval j, evaluated at any x.
double PieceProbability(const Mechanism& mech, int j, double x, int i);
std::vector<double> PieceDistribution(const Mechanism& mech, int j, double x);

}  // namespace dpq

#endif  // DPQ_MECHANISM_H_
