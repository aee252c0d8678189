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

#ifndef FEDMON_METRICS_H_
#define FEDMON_METRICS_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "fedmon/telemetry.h"
#include "fedmon/verdict.h"

namespace fedmon {

// Window-level counts with "anomalous" as the positive class.
struct ConfusionCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionCounts counts;
  // Set when the denominator was zero and the value was reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;

  bool operator==(const Metrics&) const = default;
};

Metrics MetricsFromCounts(const ConfusionCounts& counts);

// A verdict predicts "anomalous" when its action is at least
// `positive_action` and it is above the log threshold (severity > 0).
bool IsPositive(const AnomalyVerdict& verdict, Action positive_action);

absl::StatusOr<Metrics> ComputeMetrics(std::span<const Label> labels,
                                       std::span<const AnomalyVerdict> verdicts,
                                       Action positive_action = Action::kThrottle);

}  // namespace fedmon

#endif  // FEDMON_METRICS_H_
