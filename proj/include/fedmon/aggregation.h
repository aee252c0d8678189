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

#ifndef FEDMON_AGGREGATION_H_
#define FEDMON_AGGREGATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/vae.h"
#include "fedmon/wire_format.h"

namespace fedmon {

enum class AggregationKind { kFedAvg, kKrum, kMultiKrum };

absl::string_view AggregationName(AggregationKind kind);
absl::StatusOr<AggregationKind> ParseAggregation(absl::string_view name);

struct AggregationPolicy {
  AggregationKind kind = AggregationKind::kFedAvg;
  int byzantine_f = 1;   // assumed Byzantine clients (Krum variants)
  int multikrum_m = 1;   // updates averaged by MultiKrum
  std::optional<double> clip_norm;
  double dp_sigma = 0.0;

  bool operator==(const AggregationPolicy&) const = default;
};

// Krum needs n >= 2f + 3; MultiKrum additionally 1 <= m <= n - f - 2.
absl::Status ValidatePolicy(const AggregationPolicy& policy, int n_clients);

double L2Norm(std::span<const double> v);

// Scales delta by C / ||delta|| when the norm exceeds C.
absl::StatusOr<ModelUpdate> ClipUpdate(const ModelUpdate& update, double clip_norm);

// Adds i.i.d. N(0, (sigma * C)^2) to every coordinate, C being the clipping
// norm (1 when clipping is disabled). Seeded and deterministic.
absl::StatusOr<ModelUpdate> AddDpNoise(const ModelUpdate& update, double sigma,
                                       std::optional<double> clip_norm,
                                       uint64_t seed);

// Seed shared by clients i < j for their cancelling mask.
uint64_t PairwiseMaskSeed(uint64_t mask_master, int i, int j);

struct MaskResult {
  std::vector<ModelUpdate> updates;
  std::optional<std::string> warning;
};

// Client i adds sum_{j>i} PRG(s_ij) - sum_{j<i} PRG(s_ji); PRG draws are
// uniform in [-mask_scale, mask_scale). The coordinate-wise sum over clients
// is unchanged up to rounding. With fewer than two clients the updates are
// returned unmasked together with a warning.
MaskResult MaskUpdates(std::span<const ModelUpdate> updates,
                       uint64_t mask_master, double mask_scale = 1.0);

// Sample-weighted mean sum_k (n_k / N) delta_k.
absl::StatusOr<std::vector<double>> FedAvg(std::span<const ModelUpdate> updates);

struct KrumResult {
  size_t selected = 0;             // index into the input span
  std::vector<size_t> chosen;      // MultiKrum: indices averaged, best first
  std::vector<double> scores;      // per input update
  std::vector<double> delta;       // aggregated delta
};

// score(i) = sum of squared L2 distances from update i to its n - f - 2
// nearest other updates; the minimum wins, ties go to the lowest cluster id.
// The selected delta is returned unmodified.
absl::StatusOr<KrumResult> Krum(std::span<const ModelUpdate> updates, int f);

// Mean of the m best-scoring updates under the Krum score.
absl::StatusOr<KrumResult> MultiKrum(std::span<const ModelUpdate> updates, int f,
                                     int m);

// params + server_lr * delta.
absl::StatusOr<VaeParams> ApplyGlobal(const VaeParams& params,
                                      std::span<const double> delta,
                                      double server_lr = 1.0);

int64_t UpdateSizeBytes(const ModelUpdate& update);

}  // namespace fedmon

#endif  // FEDMON_AGGREGATION_H_
