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

#ifndef FEDMON_VERDICT_H_
#define FEDMON_VERDICT_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fedmon {

// Ordered by severity: Log < Throttle < Block.
enum class Action { kLog = 0, kThrottle = 1, kBlock = 2 };

absl::string_view ActionName(Action action);
absl::StatusOr<Action> ParseAction(absl::string_view name);

struct Thresholds {
  double log = 0.5;
  double throttle = 0.7;
  double block = 0.9;

  bool operator==(const Thresholds&) const = default;
};

absl::Status ValidateThresholds(const Thresholds& t);

struct AnomalyVerdict {
  double recon_score = 0.0;
  double iforest_score = 0.0;
  double fused = 0.0;
  Action action = Action::kLog;
  // 0 below the log threshold (recorded as Log with no effect), then 1, 2, 3
  // for Log, Throttle, Block.
  int severity = 0;
};

// fused = w * recon + (1 - w) * iforest. Threshold comparisons are inclusive:
// fused == t_block yields Block.
absl::StatusOr<AnomalyVerdict> FuseAndDecide(double recon_score,
                                             double iforest_score, double weight,
                                             const Thresholds& thresholds);

}  // namespace fedmon

#endif  // FEDMON_VERDICT_H_
