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

#include "fedmon/aggregation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace fedmon {
namespace {

using ::testing::ElementsAre;

ModelUpdate Update(std::vector<double> delta, int64_t n_samples = 1, int cluster = 0) {
  ModelUpdate u;
  u.delta = std::move(delta);
  u.n_samples = n_samples;
  u.cluster_id = cluster;
  return u;
}

std::vector<double> RandomDelta(std::mt19937_64& rng, int p, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(p);
  for (double& x : v) x = g(rng);
  return v;
}

double SquaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Reference Krum: for every client, enumerate every subset of n - f - 2 other
// clients and keep the smallest summed squared distance. Ties go to the
// lowest cluster id.
size_t BruteForceKrum(const std::vector<ModelUpdate>& updates, int f) {
  const int n = static_cast<int>(updates.size());
  const int k = n - f - 2;
  std::vector<double> score(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    for (uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
      if (std::popcount(mask) != k) continue;
      double s = 0.0;
      for (size_t b = 0; b < others.size(); ++b) {
        if (mask & (1u << b)) s += SquaredDistance(updates[i].delta, updates[others[b]].delta);
      }
      score[i] = std::min(score[i], s);
    }
  }
  size_t best = 0;
  for (int i = 1; i < n; ++i) {
    if (score[i] < score[best] ||
        (score[i] == score[best] && updates[i].cluster_id < updates[best].cluster_id)) {
      best = i;
    }
  }
  return best;
}

TEST(ClipTest, Examples) {
  ASSERT_OK_AND_ASSIGN(ModelUpdate big, ClipUpdate(Update({6.0, 8.0}), 1.0));
  EXPECT_DOUBLE_EQ(big.delta[0], 0.6);
  EXPECT_DOUBLE_EQ(big.delta[1], 0.8);
  EXPECT_NEAR(L2Norm(big.delta), 1.0, 1e-15);
  ASSERT_OK_AND_ASSIGN(ModelUpdate small, ClipUpdate(Update({0.3, 0.4}), 1.0));
  EXPECT_THAT(small.delta, ElementsAre(0.3, 0.4));
  EXPECT_FALSE(ClipUpdate(Update({1.0}), 0.0).ok());
}

TEST(ClipTest, NormBoundProperty) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c_dist(1e-3, 100.0);
  std::uniform_int_distribution<int> p_dist(1, 64);
  for (int trial = 0; trial < 1000; ++trial) {
    const double c = c_dist(rng);
    const ModelUpdate u = Update(RandomDelta(rng, p_dist(rng), std::exp(c_dist(rng) / 20)));
    ASSERT_OK_AND_ASSIGN(ModelUpdate out, ClipUpdate(u, c));
    EXPECT_LE(L2Norm(out.delta), c + 1e-12);
    if (L2Norm(u.delta) <= c) EXPECT_EQ(out.delta, u.delta);
  }
}

TEST(DpNoiseTest, ZeroSigmaIsIdentityAndSeedIsDeterministic) {
  const ModelUpdate u = Update({1.0, 2.0, 3.0});
  ASSERT_OK_AND_ASSIGN(ModelUpdate same, AddDpNoise(u, 0.0, 1.0, 5));
  EXPECT_EQ(same, u);
  ASSERT_OK_AND_ASSIGN(ModelUpdate a, AddDpNoise(u, 0.5, 1.0, 5));
  ASSERT_OK_AND_ASSIGN(ModelUpdate b, AddDpNoise(u, 0.5, 1.0, 5));
  ASSERT_OK_AND_ASSIGN(ModelUpdate c, AddDpNoise(u, 0.5, 1.0, 6));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_FALSE(AddDpNoise(u, -1.0, 1.0, 5).ok());
}

TEST(DpNoiseTest, EmpiricalStdMatchesSigmaTimesClip) {
  for (double c : {1.0, 2.5}) {
    const ModelUpdate u = Update(std::vector<double>(10000, 0.0));
    ASSERT_OK_AND_ASSIGN(ModelUpdate out, AddDpNoise(u, 1.0, c, 99));
    const double mean = std::accumulate(out.delta.begin(), out.delta.end(), 0.0) / 10000;
    double ss = 0.0;
    for (double v : out.delta) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / 10000) / c;
    EXPECT_GE(sd, 0.97);
    EXPECT_LE(sd, 1.03);
  }
}

TEST(MaskTest, TwoClientsCancel) {
  const std::vector<ModelUpdate> ups = {Update({1.0, -2.0, 3.0}), Update({0.5, 0.5, 0.5})};
  const MaskResult r = MaskUpdates(ups, 42);
  EXPECT_FALSE(r.warning.has_value());
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(r.updates[0].delta[k] + r.updates[1].delta[k],
                ups[0].delta[k] + ups[1].delta[k], 1e-9);
  }
  EXPECT_NE(r.updates[0].delta, ups[0].delta);
}

TEST(MaskTest, SingleClientIsUnmaskedWithWarning) {
  const std::vector<ModelUpdate> ups = {Update({1.0, 2.0})};
  const MaskResult r = MaskUpdates(ups, 42);
  ASSERT_TRUE(r.warning.has_value());
  EXPECT_EQ(r.updates, ups);
}

TEST(MaskTest, SumPreservedAndEveryUpdateMaskedProperty) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> n_dist(2, 9);
  std::uniform_int_distribution<int> p_dist(1, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = n_dist(rng);
    const int p = p_dist(rng);
    std::vector<ModelUpdate> ups;
    for (int i = 0; i < n; ++i) ups.push_back(Update(RandomDelta(rng, p), 1, i));
    const MaskResult r = MaskUpdates(ups, rng(), 1.0);
    ASSERT_EQ(r.updates.size(), ups.size());
    for (int k = 0; k < p; ++k) {
      double original = 0.0, masked = 0.0;
      for (int i = 0; i < n; ++i) {
        original += ups[i].delta[k];
        masked += r.updates[i].delta[k];
      }
      ASSERT_LE(std::abs(original - masked), 1e-9);
    }
    for (int i = 0; i < n; ++i) {
      ASSERT_GT(SquaredDistance(r.updates[i].delta, ups[i].delta), 0.0);
    }
  }
}

TEST(MaskTest, PairwiseSeedsAreSymmetricInUseButDistinctAcrossPairs) {
  EXPECT_EQ(PairwiseMaskSeed(7, 1, 2), PairwiseMaskSeed(7, 1, 2));
  EXPECT_NE(PairwiseMaskSeed(7, 1, 2), PairwiseMaskSeed(7, 1, 3));
  EXPECT_NE(PairwiseMaskSeed(7, 1, 2), PairwiseMaskSeed(8, 1, 2));
}

TEST(FedAvgTest, Examples) {
  const std::vector<ModelUpdate> equal = {Update({1.0, 3.0}), Update({3.0, 5.0})};
  ASSERT_OK_AND_ASSIGN(auto avg, FedAvg(equal));
  EXPECT_THAT(avg, ElementsAre(2.0, 4.0));
  const std::vector<ModelUpdate> weighted = {Update({0.0}, 1), Update({4.0}, 3)};
  ASSERT_OK_AND_ASSIGN(avg, FedAvg(weighted));
  EXPECT_THAT(avg, ElementsAre(3.0));
}

TEST(FedAvgTest, Errors) {
  EXPECT_FALSE(FedAvg({}).ok());
  const std::vector<ModelUpdate> ragged = {Update({1.0}), Update({1.0, 2.0})};
  EXPECT_FALSE(FedAvg(ragged).ok());
  const std::vector<ModelUpdate> empty_weight = {Update({1.0}, 0), Update({2.0}, 0)};
  EXPECT_FALSE(FedAvg(empty_weight).ok());
}

TEST(FedAvgTest, IdempotenceProperty) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> w(1, 10000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto delta = RandomDelta(rng, std::uniform_int_distribution<int>(1, 32)(rng));
    std::vector<ModelUpdate> ups;
    const int n = std::uniform_int_distribution<int>(1, 9)(rng);
    for (int i = 0; i < n; ++i) ups.push_back(Update(delta, w(rng), i));
    ASSERT_OK_AND_ASSIGN(auto avg, FedAvg(ups));
    for (size_t k = 0; k < delta.size(); ++k) {
      ASSERT_NEAR(avg[k], delta[k], 1e-12 * std::max(1.0, std::abs(delta[k])));
    }
  }
}

TEST(FedAvgTest, LinearityProperty) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int64_t> w(1, 100);
  std::uniform_real_distribution<double> scalar(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    const int p = std::uniform_int_distribution<int>(1, 16)(rng);
    const double a = scalar(rng);
    std::vector<ModelUpdate> ups, scaled;
    for (int i = 0; i < n; ++i) {
      ups.push_back(Update(RandomDelta(rng, p), w(rng), i));
      scaled.push_back(ups.back());
      for (double& v : scaled.back().delta) v *= a;
    }
    ASSERT_OK_AND_ASSIGN(auto base, FedAvg(ups));
    ASSERT_OK_AND_ASSIGN(auto lhs, FedAvg(scaled));
    for (int k = 0; k < p; ++k) ASSERT_NEAR(lhs[k], a * base[k], 1e-10);
  }
}

TEST(KrumTest, OutlierIsNotSelected) {
  std::vector<ModelUpdate> ups;
  for (int i = 0; i < 4; ++i) ups.push_back(Update({0.0}, 1, i));
  ups.push_back(Update({100.0}, 1, 4));
  ASSERT_OK_AND_ASSIGN(KrumResult r, Krum(ups, 1));
  EXPECT_THAT(r.delta, ElementsAre(0.0));
  EXPECT_LT(r.selected, 4u);
  ASSERT_EQ(r.scores.size(), 5u);
  EXPECT_EQ(*std::max_element(r.scores.begin(), r.scores.end()), r.scores[4]);
}

TEST(KrumTest, IdenticalUpdatesTieBreakOnClusterId) {
  std::vector<ModelUpdate> ups;
  for (int id : {4, 2, 7, 3, 9}) ups.push_back(Update({1.0, 1.0}, 1, id));
  ASSERT_OK_AND_ASSIGN(KrumResult r, Krum(ups, 1));
  EXPECT_EQ(ups[r.selected].cluster_id, 2);
}

TEST(KrumTest, ScoreIsSumOverNearestNeighbours) {
  // n = 5, f = 1: each score sums the 2 nearest squared distances.
  std::vector<ModelUpdate> ups;
  const double xs[] = {0.0, 1.0, 3.0, 6.0, 10.0};
  for (int i = 0; i < 5; ++i) ups.push_back(Update({xs[i]}, 1, i));
  ASSERT_OK_AND_ASSIGN(KrumResult r, Krum(ups, 1));
  EXPECT_THAT(r.scores, ElementsAre(1.0 + 9.0, 1.0 + 4.0, 4.0 + 9.0, 9.0 + 16.0, 16.0 + 49.0));
  EXPECT_EQ(r.selected, 1u);
}

TEST(KrumTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(5, 9)(rng);
    const int p = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<ModelUpdate> ups;
    for (int i = 0; i < n; ++i) ups.push_back(Update(RandomDelta(rng, p), 1, ids[i]));
    ASSERT_OK_AND_ASSIGN(KrumResult r, Krum(ups, 1));
    ASSERT_EQ(r.selected, BruteForceKrum(ups, 1)) << "trial " << trial;
    EXPECT_EQ(r.delta, ups[r.selected].delta);
  }
}

TEST(KrumTest, ScalingInvarianceProperty) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(5, 12)(rng);
    const int p = std::uniform_int_distribution<int>(1, 16)(rng);
    const int f = std::uniform_int_distribution<int>(0, (n - 3) / 2)(rng);
    std::vector<ModelUpdate> ups, scaled;
    const double a = scale(rng);
    for (int i = 0; i < n; ++i) {
      ups.push_back(Update(RandomDelta(rng, p), 1, i));
      scaled.push_back(ups.back());
      for (double& v : scaled.back().delta) v *= a;
    }
    ASSERT_OK_AND_ASSIGN(KrumResult base, Krum(ups, f));
    ASSERT_OK_AND_ASSIGN(KrumResult moved, Krum(scaled, f));
    ASSERT_EQ(base.selected, moved.selected) << "trial " << trial;
  }
}

TEST(KrumTest, RobustToArbitraryMinority) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int f = std::uniform_int_distribution<int>(1, 3)(rng);
    const int n = std::uniform_int_distribution<int>(2 * f + 3, 2 * f + 6)(rng);
    const int p = std::uniform_int_distribution<int>(1, 8)(rng);
    const auto honest = RandomDelta(rng, p);
    std::vector<ModelUpdate> ups;
    for (int i = 0; i < n - f; ++i) ups.push_back(Update(honest, 1, i));
    for (int i = n - f; i < n; ++i) {
      ups.push_back(Update(RandomDelta(rng, p, std::exp(std::uniform_real_distribution<double>(-5, 5)(rng))), 1, i));
    }
    std::shuffle(ups.begin(), ups.end(), rng);
    ASSERT_OK_AND_ASSIGN(KrumResult r, Krum(ups, f));
    ASSERT_EQ(r.delta, honest) << "trial " << trial;
  }
}

TEST(KrumTest, TooFewClientsIsAPolicyError) {
  std::vector<ModelUpdate> ups;
  for (int i = 0; i < 4; ++i) ups.push_back(Update({1.0 * i}, 1, i));
  EXPECT_EQ(Krum(ups, 1).status().code(), absl::StatusCode::kFailedPrecondition);
  AggregationPolicy policy;
  policy.kind = AggregationKind::kKrum;
  EXPECT_EQ(ValidatePolicy(policy, 4).code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_OK(ValidatePolicy(policy, 5));
  policy.kind = AggregationKind::kFedAvg;
  EXPECT_OK(ValidatePolicy(policy, 1));
  policy.clip_norm = -1.0;
  EXPECT_FALSE(ValidatePolicy(policy, 3).ok());
}

TEST(MultiKrumTest, AveragesBestUpdates) {
  std::vector<ModelUpdate> ups;
  const double xs[] = {0.0, 1.0, 3.0, 6.0, 10.0, 11.0};
  for (int i = 0; i < 6; ++i) ups.push_back(Update({xs[i]}, 1, i));
  ASSERT_OK_AND_ASSIGN(KrumResult single, Krum(ups, 1));
  ASSERT_OK_AND_ASSIGN(KrumResult multi, MultiKrum(ups, 1, 2));
  EXPECT_EQ(multi.selected, single.selected);
  ASSERT_EQ(multi.chosen.size(), 2u);
  EXPECT_DOUBLE_EQ(multi.delta[0], (xs[multi.chosen[0]] + xs[multi.chosen[1]]) / 2);
  EXPECT_FALSE(MultiKrum(ups, 1, 4).ok());
  EXPECT_FALSE(MultiKrum(ups, 1, 0).ok());
}

TEST(ApplyGlobalTest, Examples) {
  const VaeParams params = VaeParams::Initialize({4, 3, 2}, 1);
  const size_t p = params.flat().size();
  ASSERT_OK_AND_ASSIGN(VaeParams same, ApplyGlobal(params, std::vector<double>(p, 0.0)));
  EXPECT_EQ(same, params);
  std::mt19937_64 rng(8);
  const auto delta = RandomDelta(rng, static_cast<int>(p), 0.1);
  ASSERT_OK_AND_ASSIGN(VaeParams frozen, ApplyGlobal(params, delta, 0.0));
  EXPECT_EQ(frozen, params);
  ASSERT_OK_AND_ASSIGN(VaeParams forward, ApplyGlobal(params, delta, 1.0));
  ASSERT_OK_AND_ASSIGN(VaeParams back, ApplyGlobal(forward, delta, -1.0));
  for (size_t k = 0; k < p; ++k) {
    EXPECT_LE(std::abs(back.flat()[k] - params.flat()[k]), 1e-15);
  }
  EXPECT_FALSE(ApplyGlobal(params, std::vector<double>(p + 1, 0.0)).ok());
}

TEST(UpdateSizeTest, DependsOnlyOnParameterCount) {
  EXPECT_EQ(UpdateSizeBytes(Update(std::vector<double>(1000, 1.0))), 8000 + kHeaderBytes);
  EXPECT_EQ(UpdateSizeBytes(Update(std::vector<double>(7, 1.0), 3, 1)),
            UpdateSizeBytes(Update(std::vector<double>(7, -2.0), 9, 2)));
}

TEST(AggregationNameTest, RoundTrip) {
  for (AggregationKind k :
       {AggregationKind::kFedAvg, AggregationKind::kKrum, AggregationKind::kMultiKrum}) {
    ASSERT_OK_AND_ASSIGN(AggregationKind back, ParseAggregation(AggregationName(k)));
    EXPECT_EQ(back, k);
  }
  EXPECT_FALSE(ParseAggregation("median").ok());
}

}  // namespace
}  // namespace fedmon
