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

#include "fedmon/harness.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fedmon/iforest.h"
#include "fedmon/random.h"
#include "fedmon/status_macros.h"
#include "fedmon/telemetry.h"

namespace fedmon {
namespace {

constexpr Label kAttackKinds[] = {Label::kCryptoMining, Label::kExfiltration,
                                  Label::kReverseShell};
// Baselines are generated for this multiple of the nominal duration and then
// truncated to the requested event count.
constexpr double kBaselineSlack = 1.25;

int64_t SplitEvents(const ExperimentConfig& config, absl::string_view split) {
  if (split == "train") return config.train_events;
  if (split == "validation") return config.validation_events;
  return config.eval_events;
}

absl::StatusOr<double> ClusterRateHz(const ExperimentConfig& config, int k) {
  double rate = 0.0;
  for (const WorkloadShare& w : config.clusters[k].workloads) {
    ASSIGN_OR_RETURN(WorkloadProfile profile, BuiltinProfile(w.profile));
    rate += profile.syscall_rate_hz * w.rate_scale;
  }
  return rate;
}

// Nominal stream duration in microseconds for n events at the cluster's rate.
absl::StatusOr<double> NominalDurationUs(const ExperimentConfig& config, int k,
                                         int64_t n) {
  ASSIGN_OR_RETURN(double rate, ClusterRateHz(config, k));
  return static_cast<double>(n) / rate * 1e6;
}

absl::StatusOr<std::vector<AttackScenario>> SplitAttacks(
    const ExperimentConfig& config, int k, absl::string_view split) {
  ASSIGN_OR_RETURN(double t, NominalDurationUs(config, k, SplitEvents(config, split)));
  auto at = [t](double frac) { return static_cast<int64_t>(std::llround(frac * t)); };
  std::vector<AttackScenario> attacks;
  if (split == "train") {
    attacks.push_back({config.clusters[k].attack, at(config.train_attack_start),
                       std::max<int64_t>(1, at(config.train_attack_duration)),
                       config.train_attack_intensity});
  } else if (split == "eval") {
    for (int i = 0; i < 3; ++i) {
      attacks.push_back(
          {kAttackKinds[i],
           at(config.eval_attack_first_start + i * config.eval_attack_spacing),
           std::max<int64_t>(1, at(config.eval_attack_duration)),
           config.eval_attack_intensity});
    }
  }
  return attacks;
}

double Quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SeedTree ClusterRoundSeeds(uint64_t master, int k, int round) {
  return SeedTree(master).Child("cluster", k).Child("round", round);
}

absl::StatusOr<VaeParams> TrainEpochs(const VaeParams& start,
                                      const std::vector<std::vector<double>>& rows,
                                      const ExperimentConfig& config,
                                      const SeedTree& seeds) {
  const TrainOptions options{config.learning_rate, config.beta, config.batch_size};
  AdamState adam;
  VaeParams params = start;
  for (int e = 0; e < config.local_epochs; ++e) {
    ASSIGN_OR_RETURN(EpochResult epoch,
                     VaeTrainEpoch(params, rows, options,
                                   seeds.Child("epoch", e).seed(), &adam));
    params = std::move(epoch.params);
  }
  return params;
}

// Runs fn(k) for every cluster concurrently and returns the results in
// cluster order. All randomness inside fn comes from per-cluster seeds, so
// the result does not depend on scheduling.
template <typename Fn>
auto ForEachCluster(int n, Fn fn) -> std::vector<decltype(fn(0))> {
  std::vector<std::future<decltype(fn(0))>> futures;
  futures.reserve(n);
  for (int k = 0; k < n; ++k) futures.push_back(std::async(std::launch::async, fn, k));
  std::vector<decltype(fn(0))> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

void MacroAverage(const std::vector<ClusterRoundStats>& stats,
                  double& macro_p, double& macro_r, double& macro_f1,
                  double& macro_nonlocal_f1) {
  macro_p = macro_r = macro_f1 = macro_nonlocal_f1 = 0.0;
  for (const ClusterRoundStats& s : stats) {
    macro_p += s.metrics.precision;
    macro_r += s.metrics.recall;
    macro_f1 += s.metrics.f1;
    macro_nonlocal_f1 += s.nonlocal_metrics.f1;
  }
  const double n = static_cast<double>(stats.size());
  macro_p /= n;
  macro_r /= n;
  macro_f1 /= n;
  macro_nonlocal_f1 /= n;
}

}  // namespace

absl::string_view MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kUpdate:
      return "update";
    case MessageKind::kGlobal:
      return "global";
    case MessageKind::kFeatureStream:
      return "feature_stream";
  }
  return "unknown";
}

absl::StatusOr<MessageKind> ParseMessageKind(absl::string_view name) {
  if (name == "update") return MessageKind::kUpdate;
  if (name == "global") return MessageKind::kGlobal;
  if (name == "feature_stream") return MessageKind::kFeatureStream;
  return absl::InvalidArgumentError(absl::StrCat("unknown message kind '", name, "'"));
}

absl::StatusOr<std::vector<WindowCounts>> PredictWindowCounts(
    const ExperimentConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  if (config.window.mode != WindowMode::kCount) {
    return absl::UnimplementedError(
        "window counts are only predictable in count mode");
  }
  std::vector<WindowCounts> counts;
  for (int k = 0; k < config.n_clusters(); ++k) {
    int64_t n[3];
    const char* splits[3] = {"train", "validation", "eval"};
    for (int s = 0; s < 3; ++s) {
      n[s] = SplitEvents(config, splits[s]);
      ASSIGN_OR_RETURN(std::vector<AttackScenario> attacks,
                       SplitAttacks(config, k, splits[s]));
      for (const AttackScenario& a : attacks) n[s] += InjectedEventCount(a);
    }
    counts.push_back({CountModeWindowCount(n[0], config.window),
                      CountModeWindowCount(n[1], config.window),
                      CountModeWindowCount(n[2], config.window)});
  }
  return counts;
}

absl::StatusOr<int64_t> PredictBandwidth(const ExperimentConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  const int64_t rounds = config.rounds;
  const int64_t k = config.n_clusters();
  switch (config.mode) {
    case Mode::kIsolated:
      return 0;
    case Mode::kFedMon: {
      const VaeShape shape{FeatureDim(config.features), config.hidden_dim,
                           config.latent_dim};
      const int64_t p = shape.ParamCount();
      return rounds * k * ((p * 8 + kHeaderBytes) + CheckpointSizeBytes(shape));
    }
    case Mode::kCentralized: {
      ASSIGN_OR_RETURN(std::vector<WindowCounts> counts, PredictWindowCounts(config));
      int64_t per_round = 0;
      for (const WindowCounts& c : counts) {
        per_round += c.total() * FeatureRecordSizeBytes(FeatureDim(config.features));
      }
      return rounds * per_round;
    }
  }
  return absl::InternalError("unhandled mode");
}

absl::StatusOr<ModelUpdate> PoisonUpdate(const ModelUpdate& update, PoisonMode mode,
                                         double factor,
                                         std::optional<double> clip_norm,
                                         uint64_t seed) {
  if (!std::isfinite(factor)) {
    return absl::InvalidArgumentError("poison factor must be finite");
  }
  ModelUpdate out = update;
  switch (mode) {
    case PoisonMode::kSignFlip:
      for (double& d : out.delta) d = -factor * d;
      break;
    case PoisonMode::kScale:
      for (double& d : out.delta) d = factor * d;
      break;
    case PoisonMode::kRandomNoise: {
      if (out.delta.empty()) break;
      RandomStream rng(seed);
      for (double& d : out.delta) d = rng.Gaussian();
      const double norm = L2Norm(out.delta);
      const double target = std::abs(factor) * clip_norm.value_or(1.0);
      const double scale = norm > 0.0 ? target / norm : 0.0;
      for (double& d : out.delta) d *= scale;
      break;
    }
  }
  return out;
}

absl::StatusOr<std::vector<TelemetryEvent>> GenerateClusterStream(
    const ExperimentConfig& config, int cluster, absl::string_view split) {
  if (cluster < 0 || cluster >= config.n_clusters()) {
    return absl::InvalidArgumentError(absl::StrCat("no cluster ", cluster));
  }
  if (split != "train" && split != "validation" && split != "eval") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown split '", split, "' (train, validation, eval)"));
  }
  const int64_t n = SplitEvents(config, split);
  ASSIGN_OR_RETURN(double nominal_us, NominalDurationUs(config, cluster, n));
  const SeedTree seeds =
      SeedTree(config.seed).Child("cluster", cluster).Child(split);

  std::vector<TelemetryEvent> stream;
  const auto& workloads = config.clusters[cluster].workloads;
  for (size_t j = 0; j < workloads.size(); ++j) {
    ASSIGN_OR_RETURN(WorkloadProfile profile, BuiltinProfile(workloads[j].profile));
    profile.syscall_rate_hz *= workloads[j].rate_scale;
    ASSIGN_OR_RETURN(
        std::vector<TelemetryEvent> base,
        GenerateBaseline(profile,
                         static_cast<int64_t>(std::ceil(kBaselineSlack * nominal_us)),
                         seeds.Child("workload", j).seed(), cluster));
    stream = MergeStreams(stream, base);
  }
  if (static_cast<int64_t>(stream.size()) < n) {
    return absl::InternalError(absl::StrCat("cluster ", cluster, " ", split,
                                            ": baseline produced only ",
                                            stream.size(), " of ", n, " events"));
  }
  stream.resize(static_cast<size_t>(n));

  ASSIGN_OR_RETURN(std::vector<AttackScenario> attacks,
                   SplitAttacks(config, cluster, split));
  for (size_t i = 0; i < attacks.size(); ++i) {
    ASSIGN_OR_RETURN(stream,
                     InjectAttack(stream, attacks[i], seeds.Child("attack", i).seed()));
  }
  for (TelemetryEvent& e : stream) e.cluster_id = cluster;
  return stream;
}

namespace {

struct Featurized {
  std::vector<FeatureVector> rows;
  // Per window: whether any event carries the given attack label.
  std::vector<bool> touches_local_attack;
};

absl::StatusOr<Featurized> Featurize(const ExperimentConfig& config, int k,
                                     absl::string_view split) {
  ASSIGN_OR_RETURN(std::vector<TelemetryEvent> stream,
                   GenerateClusterStream(config, k, split));
  ASSIGN_OR_RETURN(std::vector<EventWindow> windows,
                   WindowEvents(stream, config.window));
  const Label local = config.clusters[k].attack;
  Featurized out;
  out.rows.reserve(windows.size());
  for (const EventWindow& w : windows) {
    ASSIGN_OR_RETURN(FeatureVector fv, ExtractFeatures(w, config.features));
    out.rows.push_back(std::move(fv));
    out.touches_local_attack.push_back(std::any_of(
        w.begin(), w.end(), [local](const TelemetryEvent& e) { return e.label == local; }));
  }
  return out;
}

// Data for cluster k generated from the streams of cluster `source`.
absl::StatusOr<std::unique_ptr<ClusterData>> BuildClusterData(
    const ExperimentConfig& config, int k, int source) {
  auto data = std::make_unique<ClusterData>();
  data->cluster_id = k;
  data->local_attack = config.clusters[k].attack;
  ASSIGN_OR_RETURN(Featurized train, Featurize(config, source, "train"));
  ASSIGN_OR_RETURN(Featurized validation, Featurize(config, source, "validation"));
  ASSIGN_OR_RETURN(Featurized eval, Featurize(config, source, "eval"));
  ASSIGN_OR_RETURN(data->norm, FitNorm(train.rows));
  auto normalize = [&](const std::vector<FeatureVector>& in,
                       std::vector<std::vector<double>>& out) -> absl::Status {
    out.reserve(in.size());
    for (const FeatureVector& fv : in) {
      ASSIGN_OR_RETURN(FeatureVector n, ApplyNorm(fv, data->norm));
      out.push_back(std::move(n.values));
    }
    return absl::OkStatus();
  };
  RETURN_IF_ERROR(normalize(train.rows, data->train));
  RETURN_IF_ERROR(normalize(validation.rows, data->validation));
  RETURN_IF_ERROR(normalize(eval.rows, data->eval));
  for (const FeatureVector& fv : eval.rows) data->eval_labels.push_back(fv.window_label);
  data->eval_touches_local = std::move(eval.touches_local_attack);
  return data;
}

}  // namespace

Experiment::Experiment(const ExperimentConfig& config, const RunOptions& options)
    : config_(config), options_(options) {}

Experiment::~Experiment() = default;

absl::StatusOr<std::unique_ptr<Experiment>> Experiment::Create(
    const ExperimentConfig& config, const RunOptions& options) {
  RETURN_IF_ERROR(ValidateConfig(config));
  if (options.mirror_cluster_zero &&
      std::any_of(config.clusters.begin(), config.clusters.end(),
                  [&](const ClusterSpec& c) { return c != config.clusters[0]; })) {
    return absl::InvalidArgumentError(
        "mirror_cluster_zero needs identical cluster specs");
  }
  std::unique_ptr<Experiment> exp(new Experiment(config, options));
  exp->shape_ = {FeatureDim(config.features), config.hidden_dim, config.latent_dim};
  RETURN_IF_ERROR(ValidateShape(exp->shape_));

  auto built = ForEachCluster(config.n_clusters(), [&](int k) {
    return BuildClusterData(config, k, exp->SeedIndex(k));
  });
  for (auto& b : built) {
    if (!b.ok()) return b.status();
    exp->data_.push_back(*std::move(b));
  }
  const VaeParams init =
      VaeParams::Initialize(exp->shape_, SeedTree(config.seed).Child("model-init").seed());
  exp->models_.assign(config.n_clusters(), init);

  ExperimentReport& r = exp->report_;
  r.fingerprint = ConfigFingerprint(config);
  r.mode = config.mode;
  r.aggregation = config.policy.kind;
  r.n_clusters = config.n_clusters();
  r.feature_dim = exp->shape_.input_dim;
  r.param_count = exp->shape_.ParamCount();
  if (config.mode == Mode::kFedMon && config.secure_aggregation &&
      config.policy.kind != AggregationKind::kFedAvg) {
    r.warnings.push_back(absl::StrCat(
        "secure aggregation disabled: ", AggregationName(config.policy.kind),
        " needs individual updates"));
  }
  if (config.poison.has_value() && config.mode != Mode::kFedMon) {
    r.warnings.push_back(
        absl::StrCat("poison spec ignored in ", ModeName(config.mode), " mode"));
  }
  return exp;
}

void Experiment::Send(RoundRecord& record, int sender, int receiver,
                      MessageKind kind, int64_t bytes) {
  transcript_.push_back({record.round, sender, receiver, kind, bytes});
  record.bytes += bytes;
  if (sender != kServerId) record.clusters[sender].bytes_sent += bytes;
  if (receiver != kServerId) record.clusters[receiver].bytes_received += bytes;
}

absl::Status Experiment::TrainFederated(int round, RoundRecord& record) {
  const int n = config_.n_clusters();
  auto locals = ForEachCluster(n, [&](int k) {
    return TrainEpochs(models_[k], data_[k]->train, config_,
                       ClusterRoundSeeds(config_.seed, SeedIndex(k), round).Child("train"));
  });

  int64_t total_samples = 0;
  for (int k = 0; k < n; ++k) total_samples += data_[k]->train.size();

  std::vector<ModelUpdate> updates;
  for (int k = 0; k < n; ++k) {
    if (!locals[k].ok()) return locals[k].status();
    const SeedTree seeds = ClusterRoundSeeds(config_.seed, k, round);
    ModelUpdate u;
    u.n_samples = static_cast<int64_t>(data_[k]->train.size());
    u.cluster_id = k;
    u.round_index = round;
    const auto after = locals[k]->flat();
    const auto before = models_[k].flat();
    u.delta.resize(after.size());
    for (size_t i = 0; i < after.size(); ++i) u.delta[i] = after[i] - before[i];

    if (config_.poison.has_value() && config_.poison->client == k &&
        round >= config_.poison->start_round) {
      ASSIGN_OR_RETURN(u, PoisonUpdate(u, config_.poison->mode, config_.poison->factor,
                                       config_.policy.clip_norm,
                                       seeds.Child("poison").seed()));
      record.poisoned = true;
    }
    if (config_.policy.clip_norm.has_value()) {
      ASSIGN_OR_RETURN(u, ClipUpdate(u, *config_.policy.clip_norm));
    }
    if (config_.policy.dp_sigma > 0.0) {
      ASSIGN_OR_RETURN(u, AddDpNoise(u, config_.policy.dp_sigma, config_.policy.clip_norm,
                                     seeds.Child("dp").seed()));
    }
    updates.push_back(std::move(u));
  }

  for (int k = 0; k < n; ++k) {
    Send(record, k, kServerId, MessageKind::kUpdate,
         static_cast<int64_t>(EncodeUpdate(updates[k]).size()));
  }

  std::vector<double> aggregate;
  if (config_.policy.kind == AggregationKind::kFedAvg) {
    if (config_.secure_aggregation) {
      // Masked updates must be summed with equal weights, so each client
      // pre-scales its delta by its sample share.
      std::vector<ModelUpdate> scaled = updates;
      for (ModelUpdate& u : scaled) {
        const double w = static_cast<double>(u.n_samples) * n /
                         static_cast<double>(total_samples);
        for (double& d : u.delta) d *= w;
        u.n_samples = 1;
      }
      MaskResult masked = MaskUpdates(
          scaled, SeedTree(config_.seed).Child("mask").Child("round", round).seed(),
          config_.mask_scale);
      if (masked.warning.has_value() && round == 1) {
        report_.warnings.push_back(*masked.warning);
      }
      ASSIGN_OR_RETURN(aggregate, FedAvg(masked.updates));
    } else {
      ASSIGN_OR_RETURN(aggregate, FedAvg(updates));
    }
  } else {
    KrumResult krum;
    if (config_.policy.kind == AggregationKind::kKrum) {
      ASSIGN_OR_RETURN(krum, Krum(updates, config_.policy.byzantine_f));
    } else {
      ASSIGN_OR_RETURN(krum, MultiKrum(updates, config_.policy.byzantine_f,
                                       config_.policy.multikrum_m));
    }
    record.krum_scores = krum.scores;
    for (size_t i : krum.chosen) record.krum_selected.push_back(updates[i].cluster_id);
    aggregate = std::move(krum.delta);
  }

  ASSIGN_OR_RETURN(VaeParams global,
                   ApplyGlobal(models_[0], aggregate, config_.server_lr));
  const int64_t global_bytes = static_cast<int64_t>(EncodeCheckpoint(global).size());
  for (int k = 0; k < n; ++k) {
    Send(record, kServerId, k, MessageKind::kGlobal, global_bytes);
  }
  for (int k = 0; k < n; ++k) {
    models_[k] = options_.local_models_only ? *std::move(locals[k]) : global;
  }
  return absl::OkStatus();
}

absl::Status Experiment::TrainIsolated(int round) {
  auto locals = ForEachCluster(config_.n_clusters(), [&](int k) {
    return TrainEpochs(models_[k], data_[k]->train, config_,
                       ClusterRoundSeeds(config_.seed, SeedIndex(k), round).Child("train"));
  });
  for (size_t k = 0; k < locals.size(); ++k) {
    if (!locals[k].ok()) return locals[k].status();
    models_[k] = *std::move(locals[k]);
  }
  return absl::OkStatus();
}

absl::Status Experiment::TrainCentralized(int round, RoundRecord& record) {
  const int64_t record_bytes = FeatureRecordSizeBytes(shape_.input_dim);
  std::vector<std::vector<double>> pooled;
  for (int k = 0; k < config_.n_clusters(); ++k) {
    const ClusterData& d = *data_[k];
    // Every feature record the cluster produces is streamed; the server sees
    // training, validation and evaluation windows alike.
    Send(record, k, kServerId, MessageKind::kFeatureStream,
         d.total_windows() * record_bytes);
    pooled.insert(pooled.end(), d.train.begin(), d.train.end());
  }
  ASSIGN_OR_RETURN(
      VaeParams central,
      TrainEpochs(models_[0], pooled, config_,
                  SeedTree(config_.seed).Child("central").Child("round", round)));
  for (VaeParams& m : models_) m = central;
  return absl::OkStatus();
}

absl::StatusOr<ClusterRoundStats> Experiment::EvaluateCluster(int k, int round) const {
  const ClusterData& d = *data_[k];
  const VaeParams& model = models_[k];
  const SeedTree seeds = ClusterRoundSeeds(config_.seed, k, round);
  const uint64_t recon_seed = seeds.Child("recon").seed();

  struct Scored {
    double recon;
    std::vector<double> mu;
  };
  auto score = [&](const std::vector<double>& x) -> absl::StatusOr<Scored> {
    ASSIGN_OR_RETURN(double r, ReconScore(model, x, config_.recon_temperature,
                                          config_.eval_samples, recon_seed));
    ASSIGN_OR_RETURN(std::vector<double> mu, VaeEmbed(model, x));
    return Scored{r, std::move(mu)};
  };

  std::vector<Scored> train;
  std::vector<double> train_recon;
  for (const auto& x : d.train) {
    ASSIGN_OR_RETURN(Scored s, score(x));
    train_recon.push_back(s.recon);
    train.push_back(std::move(s));
  }
  const double cutoff = Quantile(train_recon, config_.benign_quantile);
  std::vector<std::vector<double>> benign_embeddings;
  for (Scored& s : train) {
    if (s.recon <= cutoff) benign_embeddings.push_back(std::move(s.mu));
  }
  ASSIGN_OR_RETURN(IForest forest,
                   IForestFit(benign_embeddings, config_.iforest_trees,
                              config_.iforest_psi, seeds.Child("iforest").seed()));

  auto verdict = [&](const std::vector<double>& x,
                     const Thresholds& t) -> absl::StatusOr<AnomalyVerdict> {
    ASSIGN_OR_RETURN(Scored s, score(x));
    ASSIGN_OR_RETURN(double iso, IForestScore(forest, s.mu));
    return FuseAndDecide(s.recon, iso, config_.fusion_weight, t);
  };

  std::vector<double> val_fused;
  for (const auto& x : d.validation) {
    ASSIGN_OR_RETURN(AnomalyVerdict v, verdict(x, Thresholds{}));
    val_fused.push_back(v.fused);
  }
  ClusterRoundStats stats;
  stats.cluster_id = k;
  const double t_log = Quantile(val_fused, config_.log_quantile);
  stats.thresholds = {t_log, t_log + config_.throttle_margin * (1.0 - t_log),
                      t_log + config_.block_margin * (1.0 - t_log)};

  std::vector<AnomalyVerdict> verdicts;
  for (const auto& x : d.eval) {
    ASSIGN_OR_RETURN(AnomalyVerdict v, verdict(x, stats.thresholds));
    verdicts.push_back(v);
  }
  ASSIGN_OR_RETURN(stats.metrics,
                   ComputeMetrics(d.eval_labels, verdicts, config_.positive_action));

  std::vector<Label> nl_labels;
  std::vector<AnomalyVerdict> nl_verdicts;
  for (size_t i = 0; i < verdicts.size(); ++i) {
    if (d.eval_touches_local[i]) continue;
    nl_labels.push_back(d.eval_labels[i]);
    nl_verdicts.push_back(verdicts[i]);
  }
  ASSIGN_OR_RETURN(stats.nonlocal_metrics,
                   ComputeMetrics(nl_labels, nl_verdicts, config_.positive_action));

  // Throttle and Block suppress the following windows of the same stream.
  int64_t suppressed_until = -1;
  for (int64_t i = 0; i < static_cast<int64_t>(verdicts.size()); ++i) {
    if (i <= suppressed_until) ++stats.suppressed_windows;
    if (verdicts[i].severity > 0 && verdicts[i].action >= Action::kThrottle) {
      suppressed_until = std::max(suppressed_until, i + config_.suppression_windows);
    }
  }
  return stats;
}

absl::StatusOr<RoundRecord> Experiment::RunRound() {
  RoundRecord record;
  record.round = rounds_completed() + 1;
  record.clusters.resize(config_.n_clusters());
  for (int k = 0; k < config_.n_clusters(); ++k) record.clusters[k].cluster_id = k;

  switch (config_.mode) {
    case Mode::kFedMon:
      RETURN_IF_ERROR(TrainFederated(record.round, record));
      break;
    case Mode::kIsolated:
      RETURN_IF_ERROR(TrainIsolated(record.round));
      break;
    case Mode::kCentralized:
      RETURN_IF_ERROR(TrainCentralized(record.round, record));
      break;
  }

  auto evaluated = ForEachCluster(config_.n_clusters(), [&](int k) {
    return EvaluateCluster(k, record.round);
  });
  for (int k = 0; k < config_.n_clusters(); ++k) {
    if (!evaluated[k].ok()) return evaluated[k].status();
    ClusterRoundStats& s = record.clusters[k];
    const int64_t sent = s.bytes_sent;
    const int64_t received = s.bytes_received;
    s = *std::move(evaluated[k]);
    s.bytes_sent = sent;
    s.bytes_received = received;
  }
  MacroAverage(record.clusters, record.macro_precision, record.macro_recall,
               record.macro_f1, record.macro_nonlocal_f1);

  report_.rounds.push_back(record);
  report_.cumulative_bytes += record.bytes;
  report_.final_metrics.clear();
  for (const ClusterRoundStats& s : record.clusters) {
    report_.final_metrics.push_back(s.metrics);
  }
  report_.final_macro_precision = record.macro_precision;
  report_.final_macro_recall = record.macro_recall;
  report_.final_macro_f1 = record.macro_f1;
  return record;
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const RunOptions& options,
                                               std::vector<Message>* transcript) {
  ASSIGN_OR_RETURN(std::unique_ptr<Experiment> exp, Experiment::Create(config, options));
  for (int r = 0; r < config.rounds; ++r) {
    RETURN_IF_ERROR(exp->RunRound().status());
  }
  if (transcript != nullptr) *transcript = exp->transcript();
  return exp->report();
}

}  // namespace fedmon
