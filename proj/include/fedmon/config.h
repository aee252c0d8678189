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

#ifndef FEDMON_CONFIG_H_
#define FEDMON_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/aggregation.h"
#include "fedmon/features.h"
#include "fedmon/telemetry.h"
#include "fedmon/verdict.h"

namespace fedmon {

enum class Mode { kFedMon, kIsolated, kCentralized };
absl::string_view ModeName(Mode mode);
absl::StatusOr<Mode> ParseMode(absl::string_view name);

enum class PoisonMode { kSignFlip, kScale, kRandomNoise };
absl::string_view PoisonModeName(PoisonMode mode);
absl::StatusOr<PoisonMode> ParsePoisonMode(absl::string_view name);

struct PoisonSpec {
  int client = 0;
  int start_round = 3;
  PoisonMode mode = PoisonMode::kSignFlip;
  double factor = 10.0;
  bool operator==(const PoisonSpec&) const = default;
};

struct WorkloadShare {
  std::string profile;     // built-in profile name
  double rate_scale = 1.0; // multiplies the profile's event rate
  bool operator==(const WorkloadShare&) const = default;
};

struct ClusterSpec {
  std::vector<WorkloadShare> workloads;
  Label attack = Label::kCryptoMining;  // kind injected into the training stream
  bool operator==(const ClusterSpec&) const = default;
};

// Default spec for cluster k: the pattern repeats every three clusters.
ClusterSpec DefaultClusterSpec(int k);

struct ExperimentConfig {
  Mode mode = Mode::kFedMon;
  int rounds = 10;
  uint64_t seed = 20240917;
  std::vector<ClusterSpec> clusters = {DefaultClusterSpec(0), DefaultClusterSpec(1),
                                       DefaultClusterSpec(2)};

  int local_epochs = 5;
  AggregationPolicy policy = {AggregationKind::kFedAvg, 1, 1, 10.0, 0.0};
  double server_lr = 1.0;
  bool secure_aggregation = true;
  double mask_scale = 1.0;
  std::optional<PoisonSpec> poison;

  int64_t train_events = 50'000;
  int64_t validation_events = 20'000;
  int64_t eval_events = 20'000;

  // Attack placement as fractions of the stream's nominal duration.
  double train_attack_start = 0.5;
  double train_attack_duration = 0.02;
  double train_attack_intensity = 0.5;
  double eval_attack_first_start = 0.15;
  double eval_attack_spacing = 0.3;
  double eval_attack_duration = 0.06;
  double eval_attack_intensity = 1.0;

  WindowSpec window;
  FeatureConfig features;

  int hidden_dim = 32;
  int latent_dim = 8;
  double learning_rate = 1e-3;
  double beta = 1.0;
  int batch_size = 32;
  double recon_temperature = 1.0;
  int eval_samples = 1;

  int iforest_trees = 100;
  int iforest_psi = 256;
  double fusion_weight = 0.5;
  double benign_quantile = 0.95;
  double log_quantile = 0.99;
  double throttle_margin = 0.1;
  double block_margin = 0.5;
  Action positive_action = Action::kThrottle;
  int suppression_windows = 3;

  int n_clusters() const { return static_cast<int>(clusters.size()); }
  bool operator==(const ExperimentConfig&) const = default;
};

absl::Status ValidateConfig(const ExperimentConfig& config);

// Sets one flat key path (e.g. "fl.aggregation", "cluster.1.attack").
// "experiment.n_clusters" resizes the cluster list, filling new entries
// from DefaultClusterSpec.
absl::Status ApplyConfigValue(ExperimentConfig& config, absl::string_view key,
                              absl::string_view value);

// Text format: one "key = value" per line; '#' starts a comment. Keys may
// appear in any order; experiment.n_clusters is applied first.
absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfigFile(const std::string& path);

// Every key in a fixed order with canonical value formatting. Parsing the
// result reproduces the config.
std::string CanonicalConfigText(const ExperimentConfig& config);

// 16 hex digits of FNV-1a over CanonicalConfigText.
std::string ConfigFingerprint(const ExperimentConfig& config);

std::string FormatDouble(double v);

}  // namespace fedmon

#endif  // FEDMON_CONFIG_H_
