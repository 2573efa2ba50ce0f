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
#ifndef DPQ_TOOLS_CLI_IO_H_
#define DPQ_TOOLS_CLI_IO_H_

#include <filesystem>
#include <string>

namespace dpq::cli {

inline constexpr char kOutDirEnv[] = "DPQUANT_OUT_DIR";
inline constexpr char kDefaultOutDir[] = "dpquant-out";

// --out if given, else $DPQUANT_OUT_DIR, else ./dpquant-out.
std::filesystem::path ResolveOutDir(const std::string& flag);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace dpq::cli

#endif  // DPQ_TOOLS_CLI_IO_H_
