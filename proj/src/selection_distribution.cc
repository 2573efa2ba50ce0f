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
#include "dpq/selection_distribution.h"

#include <cmath>
#include <string>

#include "dpq/bin_layout.h"
#include "dpq/errors.h"

namespace dpq {
namespace {

void ValidateTable(const TriangularTable& table, const char* name) {
  if (table.rows() < 1 || table.rows() >= kMaxBins) {
    throw DomainError(std::string(name) + " table needs 1.." +
                      std::to_string(kMaxBins - 1) + " rows");
  }
  for (int n = 1; n <= table.rows(); ++n) {
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double v = table.at(n, i);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(name) + " entry (" + std::to_string(n) +
                          "," + std::to_string(i) + ") outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw DomainError(std::string(name) + " row " + std::to_string(n) +
                        " sums to " + std::to_string(sum));
    }
  }
  // Row 1 has a single entry, so the row-sum check above pins q_1(1) = 1.
}

}  // namespace

TriangularTable::TriangularTable(int rows, double fill)
    : rows_(rows), data_(rows * (rows + 1) / 2, fill) {}

SelectionDistribution::SelectionDistribution(TriangularTable left,
                                             TriangularTable right,
                                             bool symmetric)
    : left_(std::move(left)), right_(std::move(right)), symmetric_(symmetric) {}

SelectionDistribution SelectionDistribution::Symmetric(TriangularTable table) {
  ValidateTable(table, "selection");
  return SelectionDistribution(std::move(table), TriangularTable(), true);
}

SelectionDistribution SelectionDistribution::TwoFamily(TriangularTable left,
                                                       TriangularTable right) {
  ValidateTable(left, "left");
  ValidateTable(right, "right");
  if (left.rows() != right.rows()) {
    throw DomainError("left and right tables differ in size");
  }
  return SelectionDistribution(std::move(left), std::move(right), false);
}

}  // namespace dpq
