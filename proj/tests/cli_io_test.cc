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
#include "cli_io.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace dpq::cli {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliIoTest, AtomicWriteCreatesParentsAndLeavesNoTemporaries) {
  const fs::path dir = fs::path(::testing::TempDir()) / "cli_io_test" / "nested";
  fs::remove_all(dir.parent_path());
  WriteFileAtomic(dir / "out.json", "first");
  WriteFileAtomic(dir / "out.json", "second");
  EXPECT_EQ(ReadAll(dir / "out.json"), "second");
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    (void)entry;
    ++files;
  }
  EXPECT_EQ(files, 1);
}

TEST(CliIoTest, OutDirPrecedence) {
  unsetenv(kOutDirEnv);
  EXPECT_EQ(ResolveOutDir(""), fs::path(kDefaultOutDir));
  setenv(kOutDirEnv, "/tmp/from-env", 1);
  EXPECT_EQ(ResolveOutDir(""), fs::path("/tmp/from-env"));
  EXPECT_EQ(ResolveOutDir("explicit"), fs::path("explicit"));
  unsetenv(kOutDirEnv);
}

}  // namespace
}  // namespace dpq::cli
