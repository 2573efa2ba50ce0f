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
#ifndef DPQ_SELECTION_DISTRIBUTION_H_
#define DPQ_SELECTION_DISTRIBUTION_H_

#include <vector>

namespace dpq {

// Lower-triangular table T[n][i], 1 <= i <= n <= rows, stored row-major.
class TriangularTable {
 public:
  TriangularTable() = default;
  explicit TriangularTable(int rows, double fill = 0.0);

  int rows() const { return rows_; }
  int size() const { return static_cast<int>(data_.size()); }

  double& at(int n, int i) { return data_[Offset(n, i)]; }
  double at(int n, int i) const { return data_[Offset(n, i)]; }

  // Position of (n, i) in the flat storage.
  static int Offset(int n, int i) { return n * (n - 1) / 2 + (i - 1); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const TriangularTable& other) const = default;

 private:
  int rows_ = 0;
  std::vector<double> data_;
};

// Selection laws of the two-stage quantizer for m bins. For x in
// [B_j, B_{j+1}) the left index L_j has Pr{L_j = i} = left(j, i) and the right
// index R_j has Pr{R_j = r} = right(m - j, m + 1 - r). In symmetric mode the
// right table is the left table.
class SelectionDistribution {
 public:
  // Throws DomainError unless every row is a probability vector and
  // q_1(1) = 1.
  static SelectionDistribution Symmetric(TriangularTable table);
  static SelectionDistribution TwoFamily(TriangularTable left,
                                         TriangularTable right);

  int m() const { return left_.rows() + 1; }
  bool symmetric_mode() const { return symmetric_; }

  double left(int n, int i) const { return left_.at(n, i); }
  double right(int n, int i) const {
    return symmetric_ ? left_.at(n, i) : right_.at(n, i);
  }
  const TriangularTable& left_table() const { return left_; }
  const TriangularTable& right_table() const {
    return symmetric_ ? left_ : right_;
  }

  double LeftProb(int j, int i) const { return left(j, i); }
  double RightProb(int j, int r) const { return right(m() - j, m() + 1 - r); }

 private:
  SelectionDistribution(TriangularTable left, TriangularTable right,
                        bool symmetric);

  TriangularTable left_;
  TriangularTable right_;
  bool symmetric_ = true;
};

// Row-sum tolerance for selection tables.
inline constexpr double kRowSumTolerance = 1e-10;

}  // namespace dpq

#endif  // DPQ_SELECTION_DISTRIBUTION_H_
