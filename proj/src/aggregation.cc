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
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "fedmon/random.h"

namespace fedmon {

absl::string_view AggregationName(AggregationKind kind) {
  switch (kind) {
    case AggregationKind::kFedAvg:
      return "fedavg";
    case AggregationKind::kKrum:
      return "krum";
    case AggregationKind::kMultiKrum:
      return "multikrum";
  }
  return "unknown";
}

absl::StatusOr<AggregationKind> ParseAggregation(absl::string_view name) {
  if (name == "fedavg") return AggregationKind::kFedAvg;
  if (name == "krum") return AggregationKind::kKrum;
  if (name == "multikrum") return AggregationKind::kMultiKrum;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown aggregation '", name, "' (fedavg, krum, multikrum)"));
}

absl::Status ValidatePolicy(const AggregationPolicy& policy, int n_clients) {
  if (policy.clip_norm.has_value() && !(*policy.clip_norm > 0.0)) {
    return absl::InvalidArgumentError("clip_norm must be positive");
  }
  if (!(policy.dp_sigma >= 0.0)) {
    return absl::InvalidArgumentError("dp_sigma must be non-negative");
  }
  if (policy.kind == AggregationKind::kFedAvg) return absl::OkStatus();
  if (policy.byzantine_f < 0) {
    return absl::InvalidArgumentError("byzantine f must be non-negative");
  }
  if (n_clients < 2 * policy.byzantine_f + 3) {
    return absl::FailedPreconditionError(absl::StrCat(
        AggregationName(policy.kind), " with f=", policy.byzantine_f,
        " needs at least ", 2 * policy.byzantine_f + 3, " clients, have ",
        n_clients));
  }
  if (policy.kind == AggregationKind::kMultiKrum &&
      (policy.multikrum_m < 1 ||
       policy.multikrum_m > n_clients - policy.byzantine_f - 2)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "multikrum m=", policy.multikrum_m, " must lie in [1, ",
        n_clients - policy.byzantine_f - 2, "]"));
  }
  return absl::OkStatus();
}

double L2Norm(std::span<const double> v) {
  double ss = 0.0;
  for (double x : v) ss += x * x;
  return std::sqrt(ss);
}

absl::StatusOr<ModelUpdate> ClipUpdate(const ModelUpdate& update, double clip_norm) {
  if (!(clip_norm > 0.0)) return absl::InvalidArgumentError("clip_norm must be positive");
  ModelUpdate out = update;
  const double norm = L2Norm(update.delta);
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& v : out.delta) v *= scale;
  }
  return out;
}

absl::StatusOr<ModelUpdate> AddDpNoise(const ModelUpdate& update, double sigma,
                                       std::optional<double> clip_norm,
                                       uint64_t seed) {
  if (!(sigma >= 0.0)) return absl::InvalidArgumentError("sigma must be non-negative");
  ModelUpdate out = update;
  if (sigma == 0.0) return out;
  const double stddev = sigma * clip_norm.value_or(1.0);
  RandomStream rng(seed);
  for (double& v : out.delta) v += stddev * rng.Gaussian();
  return out;
}

uint64_t PairwiseMaskSeed(uint64_t mask_master, int i, int j) {
  return DeriveSeed(mask_master, "mask-pair",
                    (static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j));
}

MaskResult MaskUpdates(std::span<const ModelUpdate> updates,
                       uint64_t mask_master, double mask_scale) {
  MaskResult result;
  result.updates.assign(updates.begin(), updates.end());
  const int n = static_cast<int>(updates.size());
  if (n < 2) {
    result.warning = absl::StrCat("masking skipped: ", n,
                                  " client(s), pairwise masks need at least 2");
    return result;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RandomStream prg(PairwiseMaskSeed(mask_master, i, j));
      std::vector<double>& a = result.updates[i].delta;
      std::vector<double>& b = result.updates[j].delta;
      const size_t len = std::min(a.size(), b.size());
      for (size_t k = 0; k < len; ++k) {
        const double m = (2.0 * prg.Uniform() - 1.0) * mask_scale;
        a[k] += m;
        b[k] -= m;
      }
    }
  }
  return result;
}

absl::StatusOr<std::vector<double>> FedAvg(std::span<const ModelUpdate> updates) {
  if (updates.empty()) return absl::InvalidArgumentError("no updates to average");
  const size_t p = updates.front().delta.size();
  int64_t total = 0;
  for (const ModelUpdate& u : updates) {
    if (u.delta.size() != p) {
      return absl::InvalidArgumentError("updates differ in parameter count");
    }
    if (u.n_samples < 0) return absl::InvalidArgumentError("negative n_samples");
    total += u.n_samples;
  }
  if (total <= 0) return absl::InvalidArgumentError("total sample count is zero");
  std::vector<double> avg(p, 0.0);
  for (const ModelUpdate& u : updates) {
    const double w = static_cast<double>(u.n_samples) / static_cast<double>(total);
    for (size_t k = 0; k < p; ++k) avg[k] += w * u.delta[k];
  }
  return avg;
}

namespace {

absl::StatusOr<std::vector<double>> KrumScores(std::span<const ModelUpdate> updates,
                                               int f) {
  const int n = static_cast<int>(updates.size());
  if (f < 0) return absl::InvalidArgumentError("f must be non-negative");
  if (n < 2 * f + 3) {
    return absl::FailedPreconditionError(absl::StrCat(
        "krum with f=", f, " needs at least ", 2 * f + 3, " updates, got ", n));
  }
  const size_t p = updates.front().delta.size();
  for (const ModelUpdate& u : updates) {
    if (u.delta.size() != p) {
      return absl::InvalidArgumentError("updates differ in parameter count");
    }
  }
  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double ss = 0.0;
      for (size_t k = 0; k < p; ++k) {
        const double d = updates[i].delta[k] - updates[j].delta[k];
        ss += d * d;
      }
      dist[i * n + j] = dist[j * n + i] = ss;
    }
  }
  const int neighbours = n - f - 2;
  std::vector<double> scores(n);
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) row.push_back(dist[i * n + j]);
    }
    std::sort(row.begin(), row.end());
    scores[i] = std::accumulate(row.begin(), row.begin() + neighbours, 0.0);
  }
  return scores;
}

// Indices ordered by (score, cluster id, position).
std::vector<size_t> RankByScore(std::span<const ModelUpdate> updates,
                                const std::vector<double>& scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    if (updates[a].cluster_id != updates[b].cluster_id) {
      return updates[a].cluster_id < updates[b].cluster_id;
    }
    return a < b;
  });
  return order;
}

}  // namespace

absl::StatusOr<KrumResult> Krum(std::span<const ModelUpdate> updates, int f) {
  absl::StatusOr<std::vector<double>> scores = KrumScores(updates, f);
  if (!scores.ok()) return scores.status();
  KrumResult result;
  result.scores = *std::move(scores);
  const std::vector<size_t> order = RankByScore(updates, result.scores);
  result.selected = order.front();
  result.chosen = {result.selected};
  result.delta = updates[result.selected].delta;
  return result;
}

absl::StatusOr<KrumResult> MultiKrum(std::span<const ModelUpdate> updates, int f,
                                     int m) {
  absl::StatusOr<std::vector<double>> scores = KrumScores(updates, f);
  if (!scores.ok()) return scores.status();
  const int n = static_cast<int>(updates.size());
  if (m < 1 || m > n - f - 2) {
    return absl::FailedPreconditionError(
        absl::StrCat("multikrum m=", m, " must lie in [1, ", n - f - 2, "]"));
  }
  KrumResult result;
  result.scores = *std::move(scores);
  const std::vector<size_t> order = RankByScore(updates, result.scores);
  result.selected = order.front();
  result.chosen.assign(order.begin(), order.begin() + m);
  result.delta.assign(updates.front().delta.size(), 0.0);
  for (size_t idx : result.chosen) {
    for (size_t k = 0; k < result.delta.size(); ++k) {
      result.delta[k] += updates[idx].delta[k];
    }
  }
  for (double& v : result.delta) v /= static_cast<double>(m);
  return result;
}

absl::StatusOr<VaeParams> ApplyGlobal(const VaeParams& params,
                                      std::span<const double> delta,
                                      double server_lr) {
  if (delta.size() != params.flat().size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "delta has ", delta.size(), " entries, model has ", params.flat().size()));
  }
  VaeParams out = params;
  std::span<double> theta = out.mutable_flat();
  for (size_t k = 0; k < theta.size(); ++k) theta[k] += server_lr * delta[k];
  return out;
}

int64_t UpdateSizeBytes(const ModelUpdate& update) { return update.byte_size(); }

}  // namespace fedmon
