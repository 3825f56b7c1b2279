// Copyright 2026 The riskcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "riskcert/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <unordered_set>
#include <vector>

#include "test_problems.h"

namespace riskcert {
namespace {

std::vector<std::uint64_t> Draws(Rng rng, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(rng.NextU64());
  return out;
}

TEST(PhiloxTest, KnownAnswerVectors) {
  using Block = std::array<std::uint32_t, 4>;
  EXPECT_EQ(Rng::PhiloxBlock({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Rng::PhiloxBlock({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Rng::PhiloxBlock({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                             {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngTest, SameSeedGivesIdenticalDraws) {
  EXPECT_EQ(Draws(Rng(0), 100), Draws(Rng(0), 100));
}

TEST(RngTest, DifferentSeedsDiffer) {
  const auto a = Draws(Rng(0), 100);
  const auto b = Draws(Rng(1), 100);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a[i] == b[i];
  EXPECT_EQ(equal, 0);
}

TEST(RngTest, SplitStreamsDoNotOverlap) {
  const Rng parent(42);
  const Rng a = parent.Split(0);
  const Rng b = parent.Split(1);
  EXPECT_NE(a.stream(), b.stream());
  EXPECT_NE(a.stream(), parent.stream());
  EXPECT_EQ(a.seed(), parent.seed());

  // Counters are (stream, position): distinct stream words make the counter
  // sets disjoint, so outputs coincide only by 64-bit chance.
  const auto da = Draws(a, 20000);
  const auto db = Draws(b, 20000);
  std::unordered_set<std::uint64_t> seen(da.begin(), da.end());
  int shared = 0;
  for (auto v : db) shared += seen.count(v) > 0;
  EXPECT_EQ(shared, 0);
}

TEST(RngTest, SplitDoesNotAdvanceParent) {
  Rng parent(9);
  (void)parent.Split(3);
  EXPECT_EQ(parent.position(), 0u);
  EXPECT_EQ(Draws(parent, 10), Draws(Rng(9), 10));
  EXPECT_EQ(Draws(parent.Split(3), 10), Draws(Rng(9).Split(3), 10));
}

TEST(RngTest, ManySplitStreamIdsAreDistinct) {
  const Rng parent(5, 7);
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 100000; ++i) ids.insert(parent.Split(i).stream());
  EXPECT_EQ(ids.size(), 100000u);
}

TEST(RngTest, UniformMeanWithinThreeSigma) {
  Rng rng(123);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  const double sigma = std::sqrt(1.0 / 12.0 / n);
  EXPECT_NEAR(sum / n, 0.5, 3.0 * sigma);
}

TEST(RngTest, UniformIntIsUniform) {
  Rng rng(77);
  std::vector<std::int64_t> counts(16, 0);
  for (int i = 0; i < 160000; ++i) ++counts[rng.UniformInt(16)];
  EXPECT_LT(testing::ChiSquareUniform(counts), testing::kChiSquare15Critical);
}

TEST(RngTest, UniformIntRejectsZero) {
  Rng rng(1);
  EXPECT_THROW(rng.UniformInt(0), std::invalid_argument);
}

}  // namespace
}  // namespace riskcert
