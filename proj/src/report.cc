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

#include "fedmon/report.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fedmon/status_macros.h"
#include "json.hpp"

namespace fedmon {
namespace {

using nlohmann::json;

json MetricsJson(const Metrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"tp", m.counts.tp},
          {"fp", m.counts.fp},
          {"tn", m.counts.tn},
          {"fn", m.counts.fn},
          {"precision_undefined", m.precision_undefined},
          {"recall_undefined", m.recall_undefined}};
}

Metrics MetricsFrom(const json& j) {
  Metrics m;
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.counts = {j.at("tp").get<int64_t>(), j.at("fp").get<int64_t>(),
              j.at("tn").get<int64_t>(), j.at("fn").get<int64_t>()};
  m.precision_undefined = j.at("precision_undefined").get<bool>();
  m.recall_undefined = j.at("recall_undefined").get<bool>();
  return m;
}

json ClusterJson(const ClusterRoundStats& s) {
  return {{"cluster_id", s.cluster_id},
          {"metrics", MetricsJson(s.metrics)},
          {"nonlocal_metrics", MetricsJson(s.nonlocal_metrics)},
          {"bytes_sent", s.bytes_sent},
          {"bytes_received", s.bytes_received},
          {"thresholds",
           {{"log", s.thresholds.log},
            {"throttle", s.thresholds.throttle},
            {"block", s.thresholds.block}}},
          {"suppressed_windows", s.suppressed_windows}};
}

ClusterRoundStats ClusterFrom(const json& j) {
  ClusterRoundStats s;
  s.cluster_id = j.at("cluster_id").get<int>();
  s.metrics = MetricsFrom(j.at("metrics"));
  s.nonlocal_metrics = MetricsFrom(j.at("nonlocal_metrics"));
  s.bytes_sent = j.at("bytes_sent").get<int64_t>();
  s.bytes_received = j.at("bytes_received").get<int64_t>();
  const json& t = j.at("thresholds");
  s.thresholds = {t.at("log").get<double>(), t.at("throttle").get<double>(),
                  t.at("block").get<double>()};
  s.suppressed_windows = j.at("suppressed_windows").get<int64_t>();
  return s;
}

json RoundJson(const RoundRecord& r) {
  json clusters = json::array();
  for (const ClusterRoundStats& s : r.clusters) clusters.push_back(ClusterJson(s));
  return {{"round", r.round},
          {"bytes", r.bytes},
          {"poisoned", r.poisoned},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"macro_nonlocal_f1", r.macro_nonlocal_f1},
          {"krum_scores", r.krum_scores},
          {"krum_selected", r.krum_selected},
          {"clusters", clusters}};
}

RoundRecord RoundFrom(const json& j) {
  RoundRecord r;
  r.round = j.at("round").get<int>();
  r.bytes = j.at("bytes").get<int64_t>();
  r.poisoned = j.at("poisoned").get<bool>();
  r.macro_precision = j.at("macro_precision").get<double>();
  r.macro_recall = j.at("macro_recall").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.macro_nonlocal_f1 = j.at("macro_nonlocal_f1").get<double>();
  r.krum_scores = j.at("krum_scores").get<std::vector<double>>();
  r.krum_selected = j.at("krum_selected").get<std::vector<int>>();
  for (const json& c : j.at("clusters")) r.clusters.push_back(ClusterFrom(c));
  return r;
}

}  // namespace

std::string ReportToJson(const ExperimentReport& report) {
  json rounds = json::array();
  for (const RoundRecord& r : report.rounds) rounds.push_back(RoundJson(r));
  json final_clusters = json::array();
  for (const Metrics& m : report.final_metrics) final_clusters.push_back(MetricsJson(m));
  json j = {{"fingerprint", report.fingerprint},
            {"mode", std::string(ModeName(report.mode))},
            {"aggregation", std::string(AggregationName(report.aggregation))},
            {"n_clusters", report.n_clusters},
            {"feature_dim", report.feature_dim},
            {"param_count", report.param_count},
            {"cumulative_bytes", report.cumulative_bytes},
            {"final",
             {{"macro_precision", report.final_macro_precision},
              {"macro_recall", report.final_macro_recall},
              {"macro_f1", report.final_macro_f1},
              {"clusters", final_clusters}}},
            {"rounds", rounds},
            {"warnings", report.warnings}};
  return j.dump(2) + "\n";
}

absl::StatusOr<ExperimentReport> ReportFromJson(absl::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    ExperimentReport report;
    report.fingerprint = j.at("fingerprint").get<std::string>();
    ASSIGN_OR_RETURN(report.mode, ParseMode(j.at("mode").get<std::string>()));
    ASSIGN_OR_RETURN(report.aggregation,
                     ParseAggregation(j.at("aggregation").get<std::string>()));
    report.n_clusters = j.at("n_clusters").get<int>();
    report.feature_dim = j.at("feature_dim").get<int>();
    report.param_count = j.at("param_count").get<int64_t>();
    report.cumulative_bytes = j.at("cumulative_bytes").get<int64_t>();
    const json& fin = j.at("final");
    report.final_macro_precision = fin.at("macro_precision").get<double>();
    report.final_macro_recall = fin.at("macro_recall").get<double>();
    report.final_macro_f1 = fin.at("macro_f1").get<double>();
    for (const json& m : fin.at("clusters")) report.final_metrics.push_back(MetricsFrom(m));
    for (const json& r : j.at("rounds")) report.rounds.push_back(RoundFrom(r));
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    return absl::DataLossError(absl::StrCat("malformed report: ", e.what()));
  }
}

std::string ReportRowsCsv(const ExperimentReport& report) {
  std::string out =
      "fingerprint,mode,round,cluster,precision,recall,f1,tp,fp,tn,fn,"
      "nonlocal_precision,nonlocal_recall,nonlocal_f1,bytes_sent,bytes_received,"
      "round_bytes,poisoned,suppressed_windows\n";
  for (const RoundRecord& r : report.rounds) {
    for (const ClusterRoundStats& s : r.clusters) {
      const Metrics& m = s.metrics;
      absl::StrAppend(&out, report.fingerprint, ",", ModeName(report.mode), ",", r.round,
                      ",", s.cluster_id, ",", FormatDouble(m.precision), ",",
                      FormatDouble(m.recall), ",", FormatDouble(m.f1), ",", m.counts.tp,
                      ",", m.counts.fp, ",", m.counts.tn, ",", m.counts.fn, ",");
      absl::StrAppend(&out, FormatDouble(s.nonlocal_metrics.precision), ",",
                      FormatDouble(s.nonlocal_metrics.recall), ",",
                      FormatDouble(s.nonlocal_metrics.f1), ",", s.bytes_sent, ",",
                      s.bytes_received, ",", r.bytes, ",", r.poisoned ? 1 : 0, ",",
                      s.suppressed_windows, "\n");
    }
  }
  return out;
}

std::string TranscriptCsv(std::span<const Message> transcript) {
  auto party = [](int id) {
    return id == kServerId ? std::string("server") : absl::StrCat("cluster", id);
  };
  std::string out = "round,sender,receiver,kind,bytes\n";
  for (const Message& m : transcript) {
    absl::StrAppend(&out, m.round, ",", party(m.sender), ",", party(m.receiver), ",",
                    MessageKindName(m.kind), ",", m.bytes, "\n");
  }
  return out;
}

absl::Status WriteTextFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write '", path, "'"));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write to '", path, "' failed"));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status ExportReport(const ExperimentReport& report, const std::string& path,
                          ReportFormat format) {
  return WriteTextFile(path, format == ReportFormat::kRows ? ReportRowsCsv(report)
                                                           : ReportToJson(report));
}

absl::StatusOr<ExperimentReport> ReadReportFile(const std::string& path) {
  ASSIGN_OR_RETURN(std::string text, ReadTextFile(path));
  return ReportFromJson(text);
}

}  // namespace fedmon
