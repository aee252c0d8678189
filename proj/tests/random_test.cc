//
// Copyright 2026 The FedMon Authors
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

#include "fedmon/random.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fedmon {
namespace {

// Textbook splitmix64, written independently of the library.
uint64_t ReferenceSplitMix(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TEST(RandomTest, StreamMatchesReferenceSplitMix) {
  for (uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    RandomStream rng(seed);
    uint64_t state = seed;
    for (int i = 0; i < 100; ++i) ASSERT_EQ(rng.NextU64(), ReferenceSplitMix(state));
  }
}

TEST(RandomTest, HashLabelIsFnv1a) {
  EXPECT_EQ(HashLabel(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(HashLabel("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(RandomTest, GoldenFile) {
  std::ifstream in(std::string(FEDMON_GOLDEN_DIR) + "/random_golden.txt");
  ASSERT_TRUE(in.good());
  uint64_t seed = 0;
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "seed") {
      fields >> seed;
      continue;
    }
    RandomStream rng(seed);
    if (kind == "derive") {
      uint64_t want = 0;
      fields >> want;
      EXPECT_EQ(DeriveSeed(seed, "cluster", 2), want);
      ++checked;
      continue;
    }
    for (int i = 0; i < 5; ++i) {
      if (kind == "u64") {
        uint64_t want = 0;
        fields >> want;
        EXPECT_EQ(rng.NextU64(), want) << "draw " << i;
      } else {
        double want = 0;
        fields >> want;
        const double got = kind == "uniform" ? rng.Uniform() : rng.Gaussian();
        EXPECT_EQ(got, want) << kind << " draw " << i;
      }
    }
    ++checked;
  }
  EXPECT_EQ(checked, 4);
}

TEST(RandomTest, DeriveIsPure) {
  EXPECT_EQ(DeriveSeed(7, "train", 3), DeriveSeed(7, "train", 3));
  SeedTree a = SeedTree(7).Child("cluster", 1).Child("round", 2);
  SeedTree b = SeedTree(7).Child("cluster", 1).Child("round", 2);
  EXPECT_EQ(a.seed(), b.seed());
  ASSERT_EQ(a.path().size(), 2u);
  EXPECT_EQ(a.path()[1].first, "round");
  EXPECT_EQ(a.path()[1].second, 2u);
}

TEST(RandomTest, DistinctIndicesGiveDistinctSeeds) {
  RandomStream pick(99);
  int distinct = 0;
  for (int t = 0; t < 1000; ++t) {
    const uint64_t master = pick.NextU64();
    const uint64_t i = pick.UniformInt(1u << 20);
    const uint64_t j = i + 1 + pick.UniformInt(1000);
    distinct += DeriveSeed(master, "x", i) != DeriveSeed(master, "x", j);
  }
  EXPECT_GE(distinct, 999);
}

TEST(RandomTest, LabelsAreOrderSensitive) {
  RandomStream pick(100);
  int distinct = 0;
  for (int t = 0; t < 1000; ++t) {
    const uint64_t master = pick.NextU64();
    distinct += DeriveSeed(master, "a", 1) != DeriveSeed(master, "b", 1);
  }
  EXPECT_GE(distinct, 999);
  // Paths are ordered: (a, b) differs from (b, a).
  EXPECT_NE(SeedTree(5).Child("a").Child("b").seed(),
            SeedTree(5).Child("b").Child("a").seed());
}

TEST(RandomTest, UniformInUnitInterval) {
  RandomStream rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomTest, GaussianMomentsOverMillionDraws) {
  RandomStream rng(2024);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  EXPECT_GE(mean, -0.005);
  EXPECT_LE(mean, 0.005);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(RandomTest, CategoricalDegenerate) {
  RandomStream rng(8);
  const std::vector<double> probs = {1.0, 0.0, 0.0};
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(rng.Categorical(probs), 0u);
}

TEST(RandomTest, CategoricalNeverPicksZeroMass) {
  RandomStream rng(9);
  const std::vector<double> probs = {0.0, 0.3, 0.0, 0.7, 0.0};
  std::vector<int> counts(probs.size());
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.Categorical(probs)];
  EXPECT_EQ(counts[0] + counts[2] + counts[4], 0);
  // Binomial std is about 0.0015; allow 5 sigma.
  EXPECT_NEAR(counts[1] / static_cast<double>(n), 0.3, 0.0075);
}

TEST(RandomTest, UniformIntRangeAndCoverage) {
  RandomStream rng(10);
  std::set<uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const uint64_t v = rng.UniformInt(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(RandomTest, ExponentialMean) {
  RandomStream rng(11);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.Exponential(4.0);
    ASSERT_GE(x, 0.0);
    sum += x;
  }
  // Mean 0.25, std of the sample mean 0.25 / sqrt(n).
  EXPECT_NEAR(sum / n, 0.25, 5 * 0.25 / std::sqrt(n));
}

TEST(RandomTest, IdenticalSeedsIdenticalSequences) {
  RandomStream a(123);
  RandomStream b(123);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.Gaussian(), b.Gaussian());
    ASSERT_EQ(a.Uniform(), b.Uniform());
  }
}

}  // namespace
}  // namespace fedmon
