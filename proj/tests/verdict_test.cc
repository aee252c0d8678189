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

#include "fedmon/verdict.h"

#include <algorithm>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace fedmon {
namespace {

constexpr Thresholds kDefault;

TEST(VerdictTest, FullWeightUsesReconScore) {
  ASSERT_OK_AND_ASSIGN(AnomalyVerdict v, FuseAndDecide(0.42, 0.9, 1.0, kDefault));
  EXPECT_EQ(v.fused, 0.42);
  EXPECT_EQ(v.severity, 0);
  EXPECT_EQ(v.action, Action::kLog);
}

TEST(VerdictTest, EqualScoresFuseToThemselves) {
  for (double w : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    ASSERT_OK_AND_ASSIGN(AnomalyVerdict v, FuseAndDecide(0.6, 0.6, w, kDefault));
    EXPECT_DOUBLE_EQ(v.fused, 0.6);
  }
}

TEST(VerdictTest, BoundariesAreInclusive) {
  const Thresholds t{0.25, 0.5, 0.75};
  struct Case {
    double fused;
    Action action;
    int severity;
  };
  for (const Case& c : {Case{0.2, Action::kLog, 0}, Case{0.25, Action::kLog, 1},
                        Case{0.5, Action::kThrottle, 2}, Case{0.6, Action::kThrottle, 2},
                        Case{0.75, Action::kBlock, 3}, Case{1.0, Action::kBlock, 3}}) {
    ASSERT_OK_AND_ASSIGN(AnomalyVerdict v, FuseAndDecide(c.fused, c.fused, 0.5, t));
    EXPECT_EQ(v.action, c.action) << c.fused;
    EXPECT_EQ(v.severity, c.severity) << c.fused;
  }
}

TEST(VerdictTest, ActionIsMonotoneInFusedScore) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t = {u(rng), u(rng), u(rng)};
    std::sort(t.begin(), t.end());
    const Thresholds th{t[0], t[1], t[2]};
    const double w = u(rng);
    std::vector<AnomalyVerdict> verdicts;
    for (int i = 0; i < 20; ++i) {
      ASSERT_OK_AND_ASSIGN(AnomalyVerdict v, FuseAndDecide(u(rng), u(rng), w, th));
      EXPECT_GE(v.fused, 0.0);
      EXPECT_LE(v.fused, 1.0);
      EXPECT_NEAR(v.fused, w * v.recon_score + (1 - w) * v.iforest_score, 1e-15);
      verdicts.push_back(v);
    }
    std::sort(verdicts.begin(), verdicts.end(),
              [](const auto& a, const auto& b) { return a.fused < b.fused; });
    for (size_t i = 1; i < verdicts.size(); ++i) {
      EXPECT_LE(verdicts[i - 1].action, verdicts[i].action);
      EXPECT_LE(verdicts[i - 1].severity, verdicts[i].severity);
    }
  }
}

TEST(VerdictTest, ValidatesInputs) {
  EXPECT_FALSE(ValidateThresholds({0.7, 0.5, 0.9}).ok());
  EXPECT_FALSE(ValidateThresholds({0.5, 0.9, 0.7}).ok());
  EXPECT_FALSE(ValidateThresholds({-0.1, 0.5, 0.9}).ok());
  EXPECT_FALSE(ValidateThresholds({0.1, 0.5, 1.1}).ok());
  EXPECT_OK(ValidateThresholds({0.5, 0.5, 0.5}));
  EXPECT_FALSE(FuseAndDecide(0.5, 0.5, 0.5, {0.9, 0.5, 0.7}).ok());
  EXPECT_FALSE(FuseAndDecide(0.5, 0.5, 1.5, kDefault).ok());
  EXPECT_FALSE(FuseAndDecide(0.5, 0.5, -0.1, kDefault).ok());
}

TEST(VerdictTest, FusedScoreIsClampedToUnitInterval) {
  ASSERT_OK_AND_ASSIGN(AnomalyVerdict v, FuseAndDecide(1.0, 1.0, 0.3, kDefault));
  EXPECT_LE(v.fused, 1.0);
  EXPECT_EQ(v.action, Action::kBlock);
  ASSERT_OK_AND_ASSIGN(v, FuseAndDecide(0.0, 0.0, 0.3, kDefault));
  EXPECT_EQ(v.fused, 0.0);
}

TEST(VerdictTest, ActionNamesRoundTrip) {
  for (Action a : {Action::kLog, Action::kThrottle, Action::kBlock}) {
    ASSERT_OK_AND_ASSIGN(Action back, ParseAction(ActionName(a)));
    EXPECT_EQ(back, a);
  }
  EXPECT_FALSE(ParseAction("drop").ok());
}

}  // namespace
}  // namespace fedmon
