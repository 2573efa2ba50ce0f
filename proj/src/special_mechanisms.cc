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
#include "dpq/special_mechanisms.h"

#include <cmath>

#include "dpq/errors.h"

namespace dpq {

BinLayout UniformBins(int m, double c, double delta) {
  if (m < 2) throw DomainError("uniform bins need m >= 2");
  std::vector<double> bins(m);
  const double step = (2 * c + 2 * delta) / (m - 1);
  for (int i = 1; i <= m; ++i) bins[i - 1] = -delta - c + (i - 1) * step;
  bins.back() = c + delta;
  return BinLayout(c, delta, std::move(bins));
}

SelectionDistribution RqmSelection(int m, double q) {
  if (!(q > 0 && q < 1)) throw DomainError("RQM needs 0 < q < 1");
  TriangularTable table(m - 1);
  for (int j = 1; j <= m - 1; ++j) {
    table.at(j, 1) = std::pow(1 - q, j - 1);
    for (int i = 2; i <= j; ++i) table.at(j, i) = q * std::pow(1 - q, j - i);
  }
  return SelectionDistribution::Symmetric(std::move(table));
}

SelectionDistribution ErmSelection(const BinLayout& layout, double gamma) {
  if (!(gamma > 0)) throw DomainError("ERM needs gamma > 0");
  const int m = layout.m();
  TriangularTable table(m - 1);
  table.at(1, 1) = 1.0;
  for (int j = 2; j <= m - 1; ++j) {
    const double scale = 2 * (layout.bin(j) - layout.bin(1));
    double total = 0.0;
    for (int i = 1; i <= j; ++i) {
      table.at(j, i) =
          std::exp(gamma * (layout.bin(i) - layout.bin(j)) / scale);
      total += table.at(j, i);
    }
    for (int i = 1; i <= j; ++i) table.at(j, i) /= total;
  }
  return SelectionDistribution::Symmetric(std::move(table));
}

Mechanism MakeErm(const ErmParams& params) {
  nlohmann::json meta = {{"construction", "erm"}, {"gamma", params.gamma}};
  return Mechanism(params.layout, ErmSelection(params.layout, params.gamma),
                   std::move(meta));
}

Mechanism MakeRqm(const RqmParams& params) {
  const BinLayout& layout = params.layout;
  const BinLayout uniform =
      UniformBins(layout.m(), layout.c(), layout.delta());
  for (int k = 1; k <= layout.m(); ++k) {
    if (std::abs(layout.bin(k) - uniform.bin(k)) > 1e-9) {
      throw DomainError("RQM requires uniformly spaced bins");
    }
  }
  nlohmann::json meta = {{"construction", "rqm"}, {"q", params.q}};
  return Mechanism(layout, RqmSelection(layout.m(), params.q), std::move(meta));
}

BoundValue ErmPrivacyBound(int m, double c, double delta, double gamma) {
  if (m < 2 || !(c > 0) || !(delta >= 0) || !(gamma >= 0)) {
    throw DomainError("invalid ERM bound arguments");
  }
  BoundValue out{gamma + std::log(2.0 * m * (c + delta) / c), m >= 4, ""};
  if (!out.assumption_satisfied) {
    out.note = "privacy bound proof assumes m >= 4";
  }
  return out;
}

double ErmErrorBound(int m, double c, double delta, double gamma) {
  if (m < 2 || !(gamma > 0)) throw DomainError("ERM error bound needs m >= 2, gamma > 0");
  return (4.0 / gamma) * std::log(static_cast<double>(m)) * (c + delta) +
         (2 * c + 2 * delta) / (m - 1);
}

double RqmPrivacyBound(int m, double c, double delta, double q) {
  if (!(q > 0 && q < 1)) throw DomainError("RQM bound needs 0 < q < 1");
  if (!(delta > 0)) throw DomainError("RQM bound diverges at delta = 0");
  return std::log(2 * (1 - q) * (1 - q) * (c + delta) / delta) +
         m * std::log(1 / (1 - q));
}

}  // namespace dpq
