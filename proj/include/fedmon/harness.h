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

#ifndef FEDMON_HARNESS_H_
#define FEDMON_HARNESS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/aggregation.h"
#include "fedmon/config.h"
#include "fedmon/features.h"
#include "fedmon/metrics.h"
#include "fedmon/vae.h"
#include "fedmon/verdict.h"
#include "fedmon/wire_format.h"

namespace fedmon {

// Multi-cluster experiment orchestration.
//
// Each cluster owns three locally generated streams: a training stream with
// a short burst of its assigned attack, a benign validation stream used to
// calibrate thresholds, and a held-out evaluation stream containing all three
// attack kinds. Streams are featurized and normalized inside the cluster;
// only model updates (FedMon) or feature records (Centralized) cross the
// simulated network, and every such message is logged in the transcript.

enum class MessageKind { kUpdate, kGlobal, kFeatureStream };
absl::string_view MessageKindName(MessageKind kind);
absl::StatusOr<MessageKind> ParseMessageKind(absl::string_view name);

inline constexpr int kServerId = -1;

struct Message {
  int round = 0;
  int sender = kServerId;    // cluster id or kServerId
  int receiver = kServerId;
  MessageKind kind = MessageKind::kUpdate;
  int64_t bytes = 0;
  bool operator==(const Message&) const = default;
};

struct ClusterRoundStats {
  int cluster_id = 0;
  Metrics metrics;           // every evaluation window
  // Windows free of the attack kind injected into this cluster's training
  // stream.
  Metrics nonlocal_metrics;
  int64_t bytes_sent = 0;
  int64_t bytes_received = 0;
  Thresholds thresholds;
  int64_t suppressed_windows = 0;
  bool operator==(const ClusterRoundStats&) const = default;
};

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<ClusterRoundStats> clusters;
  int64_t bytes = 0;  // all messages in this round
  std::vector<double> krum_scores;   // empty unless a Krum variant ran
  std::vector<int> krum_selected;    // cluster ids whose updates were kept
  bool poisoned = false;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double macro_nonlocal_f1 = 0.0;
  bool operator==(const RoundRecord&) const = default;
};

struct ExperimentReport {
  std::string fingerprint;
  Mode mode = Mode::kFedMon;
  AggregationKind aggregation = AggregationKind::kFedAvg;
  int n_clusters = 0;
  int feature_dim = 0;
  int64_t param_count = 0;
  std::vector<RoundRecord> rounds;
  int64_t cumulative_bytes = 0;
  std::vector<Metrics> final_metrics;  // per cluster; empty when R = 0
  double final_macro_precision = 0.0;
  double final_macro_recall = 0.0;
  double final_macro_f1 = 0.0;
  std::vector<std::string> warnings;
  bool operator==(const ExperimentReport&) const = default;
};

// Test hooks. Production runs use the defaults.
struct RunOptions {
  // FedMon only: after the round's messages are exchanged, every cluster keeps
  // its own locally trained model instead of the aggregate, which makes the
  // aggregation step contribute nothing.
  bool local_models_only = false;
  // Every cluster reuses cluster 0's generated data and training seeds, so
  // all local updates coincide. Requires identical cluster specs.
  bool mirror_cluster_zero = false;
};

// Per-cluster window counts implied by the configuration alone.
struct WindowCounts {
  int64_t train = 0;
  int64_t validation = 0;
  int64_t eval = 0;
  int64_t total() const { return train + validation + eval; }
};

absl::StatusOr<std::vector<WindowCounts>> PredictWindowCounts(
    const ExperimentConfig& config);

// Cumulative inter-cluster bytes for the configured mode, from arithmetic on
// the configuration (no data is generated). Count-mode windows only.
absl::StatusOr<int64_t> PredictBandwidth(const ExperimentConfig& config);

absl::StatusOr<ModelUpdate> PoisonUpdate(const ModelUpdate& update, PoisonMode mode,
                                         double factor,
                                         std::optional<double> clip_norm,
                                         uint64_t seed);

// Event stream for one cluster and split ("train", "validation", "eval"),
// including injected attacks. Exposed for the CLI event dump and for tests.
absl::StatusOr<std::vector<TelemetryEvent>> GenerateClusterStream(
    const ExperimentConfig& config, int cluster, absl::string_view split);

struct ClusterData;

class Experiment {
 public:
  // Validates the configuration, generates and featurizes all cluster data
  // and initializes the global model.
  static absl::StatusOr<std::unique_ptr<Experiment>> Create(
      const ExperimentConfig& config, const RunOptions& options = {});
  ~Experiment();

  absl::StatusOr<RoundRecord> RunRound();

  int rounds_completed() const { return static_cast<int>(report_.rounds.size()); }
  const std::vector<Message>& transcript() const { return transcript_; }
  const ExperimentReport& report() const { return report_; }
  // Model currently held by each cluster.
  const std::vector<VaeParams>& cluster_models() const { return models_; }
  const VaeShape& shape() const { return shape_; }
  const ClusterData& cluster_data(int k) const { return *data_[k]; }

 private:
  Experiment(const ExperimentConfig& config, const RunOptions& options);

  absl::Status TrainFederated(int round, RoundRecord& record);
  absl::Status TrainIsolated(int round);
  absl::Status TrainCentralized(int round, RoundRecord& record);
  absl::StatusOr<ClusterRoundStats> EvaluateCluster(int k, int round) const;
  // Cluster index used for data and training seeds.
  int SeedIndex(int k) const { return options_.mirror_cluster_zero ? 0 : k; }
  void Send(RoundRecord& record, int sender, int receiver, MessageKind kind,
            int64_t bytes);

  ExperimentConfig config_;
  RunOptions options_;
  VaeShape shape_;
  std::vector<std::unique_ptr<ClusterData>> data_;
  std::vector<VaeParams> models_;
  std::vector<Message> transcript_;
  ExperimentReport report_;
};

struct ClusterData {
  int cluster_id = 0;
  Label local_attack = Label::kBenign;
  NormStats norm;
  std::vector<std::vector<double>> train;
  std::vector<std::vector<double>> validation;
  std::vector<std::vector<double>> eval;
  std::vector<Label> eval_labels;
  // Evaluation windows holding at least one event of the local attack kind;
  // these are left out of the non-local metrics.
  std::vector<bool> eval_touches_local;
  int64_t total_windows() const {
    return static_cast<int64_t>(train.size() + validation.size() + eval.size());
  }
};

absl::StatusOr<ExperimentReport> RunExperiment(
    const ExperimentConfig& config, const RunOptions& options = {},
    std::vector<Message>* transcript = nullptr);

}  // namespace fedmon

#endif  // FEDMON_HARNESS_H_
