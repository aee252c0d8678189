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

#ifndef FEDMON_FEATURES_H_
#define FEDMON_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmon/telemetry.h"

namespace fedmon {

enum class WindowMode { kCount, kTime };

// size and stride are event counts in kCount mode, microseconds in kTime.
struct WindowSpec {
  WindowMode mode = WindowMode::kCount;
  int64_t size = 200;
  int64_t stride = 200;

  bool operator==(const WindowSpec&) const = default;
};

absl::Status ValidateWindowSpec(const WindowSpec& spec);

using EventWindow = std::span<const TelemetryEvent>;

// Count mode: windows start at 0, stride, 2*stride, ... while the start is
// inside the stream; the last ones may be partial. Time mode: windows
// [t0 + k*stride, t0 + k*stride + size) anchored at the first timestamp;
// windows that contain no event are skipped. Views alias `stream`.
absl::StatusOr<std::vector<EventWindow>> WindowEvents(
    std::span<const TelemetryEvent> stream, const WindowSpec& spec);

// Number of windows WindowEvents produces for `n_events` in count mode.
int64_t CountModeWindowCount(int64_t n_events, const WindowSpec& spec);

inline constexpr int kTemporalDims = 5;
inline constexpr int64_t kBurstIntervalUs = 100'000;

struct FeatureConfig {
  int vocab_size = kVocabSize;
  int ngram = 3;
  int buckets = 32;

  bool operator==(const FeatureConfig&) const = default;
};

// D = vocab_size + 5 + buckets. Layout: syscall histogram, then
// {rate, net_frac, bytes_mean, iat_std, burst}, then hashed n-gram counts.
inline int FeatureDim(const FeatureConfig& config) {
  return config.vocab_size + kTemporalDims + config.buckets;
}

struct FeatureVector {
  std::vector<double> values;
  // Plurality ground-truth label, ties resolved toward the attack label.
  // Carried for evaluation only; never used for training.
  Label window_label = Label::kBenign;
  int32_t cluster_id = 0;

  bool operator==(const FeatureVector&) const = default;
};

// FNV-1a (64-bit) over the n-gram's ids, each encoded as 4 little-endian
// bytes. The bucket is hash % buckets.
uint64_t NgramHash(std::span<const int32_t> ids);

absl::StatusOr<FeatureVector> ExtractFeatures(EventWindow window,
                                              const FeatureConfig& config);

inline constexpr double kStdFloor = 1e-6;

struct NormStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std, clamped to kStdFloor

  bool operator==(const NormStats&) const = default;
};

absl::StatusOr<NormStats> FitNorm(std::span<const FeatureVector> benign);
absl::StatusOr<FeatureVector> ApplyNorm(const FeatureVector& fv,
                                        const NormStats& stats);

std::vector<std::string> FeatureColumnNames(const FeatureConfig& config);

// Header of dimension names plus a trailing "label" column, then one row per
// vector with the label as its integer code.
void WriteFeatureCsv(std::span<const FeatureVector> rows,
                     const FeatureConfig& config, std::ostream& out);

}  // namespace fedmon

#endif  // FEDMON_FEATURES_H_
