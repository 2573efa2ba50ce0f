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
#ifndef DPQ_FORMAT_H_
#define DPQ_FORMAT_H_

#include <string>
#include <vector>

namespace dpq {

// Shortest decimal string that parses back to exactly v.
std::string ShortestDouble(double v);

// "[a, b, c]" using ShortestDouble.
std::string FormatList(const std::vector<double>& values);

}  // namespace dpq

#endif  // DPQ_FORMAT_H_
