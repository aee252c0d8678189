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

#ifndef FEDMON_REPORT_H_
#define FEDMON_REPORT_H_

#include <span>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/harness.h"

namespace fedmon {

enum class ReportFormat {
  kRows,        // one CSV line per (round, cluster)
  kStructured,  // the full report as JSON
};

std::string ReportToJson(const ExperimentReport& report);
absl::StatusOr<ExperimentReport> ReportFromJson(absl::string_view text);

std::string ReportRowsCsv(const ExperimentReport& report);
std::string TranscriptCsv(std::span<const Message> transcript);

absl::Status WriteTextFile(const std::string& path, absl::string_view contents);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);

absl::Status ExportReport(const ExperimentReport& report, const std::string& path,
                          ReportFormat format);
absl::StatusOr<ExperimentReport> ReadReportFile(const std::string& path);

}  // namespace fedmon

#endif  // FEDMON_REPORT_H_
