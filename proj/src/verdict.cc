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
#include <cmath>

#include "absl/strings/str_cat.h"

namespace fedmon {

absl::string_view ActionName(Action action) {
  switch (action) {
    case Action::kLog:
      return "log";
    case Action::kThrottle:
      return "throttle";
    case Action::kBlock:
      return "block";
  }
  return "unknown";
}

absl::StatusOr<Action> ParseAction(absl::string_view name) {
  if (name == "log") return Action::kLog;
  if (name == "throttle") return Action::kThrottle;
  if (name == "block") return Action::kBlock;
  return absl::InvalidArgumentError(absl::StrCat("unknown action '", name, "'"));
}

absl::Status ValidateThresholds(const Thresholds& t) {
  if (!(0.0 <= t.log && t.log <= t.throttle && t.throttle <= t.block &&
        t.block <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "thresholds must satisfy 0 <= log <= throttle <= block <= 1, got (",
        t.log, ", ", t.throttle, ", ", t.block, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<AnomalyVerdict> FuseAndDecide(double recon_score,
                                             double iforest_score, double weight,
                                             const Thresholds& thresholds) {
  if (absl::Status s = ValidateThresholds(thresholds); !s.ok()) return s;
  if (!(weight >= 0.0 && weight <= 1.0)) {
    return absl::InvalidArgumentError("fusion weight must lie in [0, 1]");
  }
  AnomalyVerdict v;
  v.recon_score = recon_score;
  v.iforest_score = iforest_score;
  // Written as i + w (r - i) so that equal component scores and the
  // endpoint weights reproduce their inputs exactly.
  double fused = recon_score;
  if (weight == 0.0) {
    fused = iforest_score;
  } else if (weight != 1.0) {
    fused = iforest_score + weight * (recon_score - iforest_score);
  }
  v.fused = std::clamp(fused, 0.0, 1.0);
  if (v.fused >= thresholds.block) {
    v.action = Action::kBlock;
    v.severity = 3;
  } else if (v.fused >= thresholds.throttle) {
    v.action = Action::kThrottle;
    v.severity = 2;
  } else if (v.fused >= thresholds.log) {
    v.action = Action::kLog;
    v.severity = 1;
  } else {
    v.action = Action::kLog;
    v.severity = 0;
  }
  return v;
}

}  // namespace fedmon
