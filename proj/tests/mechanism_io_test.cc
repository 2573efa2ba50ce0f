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
#include "dpq/mechanism_io.h"

#include <gtest/gtest.h>

#include <cstring>

#include "dpq/errors.h"
#include "dpq/format.h"
#include "test_util.h"

namespace dpq {
namespace {

using testing::RandomLayout;
using testing::RandomMechanism;

uint64_t Bits(double v) {
  uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

TEST(MechanismIoTest, RoundTripIsBitExact) {
  Rng rng = MakeSubstream(31, 0);
  for (int n = 0; n < 50; ++n) {
    const Mechanism mech = RandomMechanism(rng, RandomLayout(rng, 3 + n % 8), n % 2 == 0);
    const std::string text = SerializeMechanism(mech);
    const Mechanism back = ParseMechanism(text);
    ASSERT_EQ(back.m(), mech.m());
    EXPECT_EQ(Bits(back.layout().c()), Bits(mech.layout().c()));
    EXPECT_EQ(Bits(back.layout().delta()), Bits(mech.layout().delta()));
    for (int k = 1; k <= mech.m(); ++k) {
      EXPECT_EQ(Bits(back.layout().bin(k)), Bits(mech.layout().bin(k)));
    }
    const auto& a = mech.selection();
    const auto& b = back.selection();
    EXPECT_EQ(a.symmetric_mode(), b.symmetric_mode());
    for (int r = 1; r < mech.m(); ++r) {
      for (int i = 1; i <= r; ++i) {
        EXPECT_EQ(Bits(a.left(r, i)), Bits(b.left(r, i)));
        EXPECT_EQ(Bits(a.right(r, i)), Bits(b.right(r, i)));
      }
    }
    EXPECT_EQ(SerializeMechanism(back), text);
  }
}

TEST(MechanismIoTest, MalformedDocumentsNameTheProblem) {
  try {
    ParseMechanism("{\"c\": 1, \"bins\": [1, 2");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
  Rng rng = MakeSubstream(32, 0);
  nlohmann::json doc = MechanismToJson(RandomMechanism(rng, RandomLayout(rng, 4), false));
  doc.erase("bins");
  try {
    MechanismFromJson(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bins"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadMechanismFile("/nonexistent/mech.json"), ParseError);
}

TEST(FormatTest, ShortestDoubleRoundTrips) {
  Rng rng = MakeSubstream(33, 0);
  for (int k = 0; k < 10000; ++k) {
    const double v = (Uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(Bits(std::stod(ShortestDouble(v))), Bits(v));
  }
  EXPECT_EQ(ShortestDouble(0.1), "0.1");
  EXPECT_EQ(ShortestDouble(3.0), "3");
  EXPECT_EQ(FormatList({-1.5, 2.0}), "[-1.5, 2]");
}

}  // namespace
}  // namespace dpq
