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

#include "fedmon/metrics.h"

#include "absl/strings/str_cat.h"

namespace fedmon {

Metrics MetricsFromCounts(const ConfusionCounts& c) {
  Metrics m;
  m.counts = c;
  if (c.tp + c.fp > 0) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  } else {
    m.precision_undefined = true;
  }
  if (c.tp + c.fn > 0) {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  } else {
    m.recall_undefined = true;
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

bool IsPositive(const AnomalyVerdict& verdict, Action positive_action) {
  return verdict.severity > 0 &&
         static_cast<int>(verdict.action) >= static_cast<int>(positive_action);
}

absl::StatusOr<Metrics> ComputeMetrics(std::span<const Label> labels,
                                       std::span<const AnomalyVerdict> verdicts,
                                       Action positive_action) {
  if (labels.size() != verdicts.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "got ", labels.size(), " labels but ", verdicts.size(), " verdicts"));
  }
  ConfusionCounts c;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] != Label::kBenign;
    const bool predicted = IsPositive(verdicts[i], positive_action);
    if (actual && predicted) ++c.tp;
    if (!actual && predicted) ++c.fp;
    if (!actual && !predicted) ++c.tn;
    if (actual && !predicted) ++c.fn;
  }
  return MetricsFromCounts(c);
}

}  // namespace fedmon
