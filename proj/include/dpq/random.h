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
#ifndef DPQ_RANDOM_H_
#define DPQ_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpq {

using Rng = std::mt19937_64;

// Independent stream for (seed, index); used to give every trial or grid
// point its own generator so parallel and serial runs draw identical values.
Rng MakeSubstream(uint64_t seed, uint64_t index);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace dpq

#endif  // DPQ_RANDOM_H_
