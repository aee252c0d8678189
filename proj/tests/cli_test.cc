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

#include "fedmon/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "fedmon/report.h"
#include "tests/test_util.h"

namespace fedmon {
namespace {

namespace fs = std::filesystem;

using ::testing::HasSubstr;

constexpr char kTinyConfig[] = R"(experiment.rounds = 1
fl.local_epochs = 1
data.train_events = 6000
data.validation_events = 4000
data.eval_events = 6000
model.hidden = 6
model.latent = 2
detect.iforest_trees = 10
)";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("fedmon_cli_" + std::string(
                                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    tiny_ = (dir_ / "tiny.cfg").string();
    ASSERT_OK(WriteTextFile(tiny_, kTinyConfig));
  }

  std::string Config(const std::string& name) const {
    return std::string(FEDMON_CONFIG_DIR) + "/" + name;
  }

  fs::path dir_;
  std::string tiny_;
};

TEST_F(CliTest, ValidateKnownGoodConfig) {
  const CliResult r = Invoke({"validate", Config("default.cfg")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("fingerprint=" + ConfigFingerprint(ExperimentConfig())));
  EXPECT_THAT(r.out, HasSubstr("predicted_bytes=3560160"));
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  const CliResult r = Invoke({"run", (dir_ / "nope.cfg").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("nope.cfg"));
  EXPECT_EQ(Invoke({"validate", (dir_ / "nope.cfg").string()}).code, kExitUsage);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"validate", tiny_, "--bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"validate", tiny_, "--mode", "federated"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"validate", tiny_, "--agg", "krum"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"validate", tiny_, "--rounds", "-1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"validate", tiny_, "--poison", "client=9"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"sweep", tiny_, "--param", "nokey"}).code, kExitUsage);
  const std::string bad = (dir_ / "bad.cfg").string();
  ASSERT_OK(WriteTextFile(bad, "fl.unknown = 1\n"));
  const CliResult r = Invoke({"validate", bad});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("unknown config key"));
}

TEST_F(CliTest, HelpExitsZero) {
  const CliResult r = Invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("compare"));
}

TEST_F(CliTest, RunWritesReportFiles) {
  const fs::path out = dir_ / "run";
  const CliResult r = Invoke({"run", tiny_, "--seed", "7", "--rounds", "2", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"report.json", "rounds.csv", "transcript.csv", "config.txt"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  ASSERT_OK_AND_ASSIGN(ExperimentReport report, ReadReportFile((out / "report.json").string()));
  EXPECT_EQ(report.rounds.size(), 2u);
  ASSERT_OK_AND_ASSIGN(std::string config_text, ReadTextFile((out / "config.txt").string()));
  ASSERT_OK_AND_ASSIGN(ExperimentConfig config, ParseConfig(config_text));
  EXPECT_EQ(config.seed, 7u);
  EXPECT_EQ(report.fingerprint, ConfigFingerprint(config));
}

TEST_F(CliTest, PoisonAndModeFlagsApply) {
  const fs::path out = dir_ / "poison";
  const CliResult r =
      Invoke({"run", tiny_, "--rounds", "2", "--poison", "client=1,round=2,mode=signflip,factor=10",
           "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_OK_AND_ASSIGN(ExperimentReport report, ReadReportFile((out / "report.json").string()));
  EXPECT_FALSE(report.rounds[0].poisoned);
  EXPECT_TRUE(report.rounds[1].poisoned);

  const CliResult iso = Invoke({"run", tiny_, "--mode", "isolated", "--out", (dir_ / "iso").string()});
  ASSERT_EQ(iso.code, kExitOk) << iso.err;
  EXPECT_THAT(iso.out, HasSubstr("mode=isolated"));
  EXPECT_THAT(iso.out, HasSubstr("bytes=0"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const fs::path env_dir = dir_ / "from_env";
  ASSERT_EQ(setenv(kOutDirEnv, env_dir.c_str(), 1), 0);
  const CliResult r = Invoke({"run", tiny_});
  unsetenv(kOutDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(env_dir / "report.json"));
}

TEST_F(CliTest, CompareFedMonAgainstCentralizedBandwidth) {
  const CliResult r = Invoke({"compare", Config("default.cfg"), Config("centralized.cfg"), "--rounds",
                           "1", "--out", (dir_ / "cmp").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const size_t pos = r.out.find("bandwidth_ratio=");
  ASSERT_NE(pos, std::string::npos);
  const double ratio = std::strtod(r.out.c_str() + pos + 16, nullptr);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LT(ratio, 0.4);
  EXPECT_TRUE(fs::exists(dir_ / "cmp" / "compare.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "cmp" / "a" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "cmp" / "b" / "report.json"));
}

TEST_F(CliTest, SweepRunsEveryValue) {
  const fs::path out = dir_ / "sweep";
  const CliResult r =
      Invoke({"sweep", tiny_, "--param", "detect.fusion_weight=0.3,0.7", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_OK_AND_ASSIGN(std::string csv, ReadTextFile((out / "sweep.csv").string()));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_THAT(csv, HasSubstr("detect.fusion_weight,0.3,"));
  EXPECT_EQ(Invoke({"sweep", tiny_, "--param", "detect.fusion_weight=2", "--out", out.string()}).code,
            kExitUsage);
}

TEST_F(CliTest, DumpWritesEventsAndFeatures) {
  const fs::path out = dir_ / "dump";
  const CliResult r =
      Invoke({"dump", tiny_, "--cluster", "2", "--split", "eval", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_OK_AND_ASSIGN(std::string events,
                       ReadTextFile((out / "cluster2_eval_events.csv").string()));
  EXPECT_THAT(events, ::testing::StartsWith(kEventCsvHeader));
  EXPECT_TRUE(fs::exists(out / "cluster2_eval_features.csv"));
  EXPECT_EQ(Invoke({"dump", tiny_, "--cluster", "5", "--out", out.string()}).code, kExitUsage);
}

TEST(PoisonFlagTest, ParsesAndRejects) {
  ASSERT_OK_AND_ASSIGN(PoisonSpec p, ParsePoisonFlag("client=2,round=4,mode=scale,factor=-3"));
  EXPECT_EQ(p.client, 2);
  EXPECT_EQ(p.start_round, 4);
  EXPECT_EQ(p.mode, PoisonMode::kScale);
  EXPECT_EQ(p.factor, -3.0);
  ASSERT_OK_AND_ASSIGN(PoisonSpec d, ParsePoisonFlag("client=1"));
  EXPECT_EQ(d.start_round, 3);
  EXPECT_EQ(d.mode, PoisonMode::kSignFlip);
  EXPECT_FALSE(ParsePoisonFlag("client").ok());
  EXPECT_FALSE(ParsePoisonFlag("colour=red").ok());
  EXPECT_FALSE(ParsePoisonFlag("factor=abc").ok());
}

}  // namespace
}  // namespace fedmon
