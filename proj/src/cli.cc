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

#include "fedmon/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fedmon/features.h"
#include "fedmon/harness.h"
#include "fedmon/report.h"
#include "fedmon/status_macros.h"
#include "fedmon/telemetry.h"

namespace fedmon {
namespace {

namespace fs = std::filesystem;

// Failures that are the caller's fault exit with kExitUsage.
struct UsageError {
  std::string message;
};

struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<int> rounds;
  std::string mode;
  std::string agg;
  std::string poison;
  std::string positive;
  std::string out_dir;
};

void AddOverrideFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--rounds", o.rounds, "Federated rounds")->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", o.mode, "fedmon | isolated | centralized");
  cmd->add_option("--agg", o.agg, "fedavg | krum | multikrum");
  cmd->add_option("--poison", o.poison,
                  "client=K,round=N,mode=signflip|scale|randomnoise,factor=F");
  cmd->add_option("--positive", o.positive,
                  "Lowest action counted as a positive prediction (log | throttle | block)");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

absl::StatusOr<ExperimentConfig> LoadWithOverrides(const std::string& path,
                                                   const Overrides& o) {
  ASSIGN_OR_RETURN(ExperimentConfig config, LoadConfigFile(path));
  if (o.seed.has_value()) config.seed = *o.seed;
  if (o.rounds.has_value()) config.rounds = *o.rounds;
  if (!o.mode.empty()) {
    ASSIGN_OR_RETURN(config.mode, ParseMode(o.mode));
  }
  if (!o.agg.empty()) {
    ASSIGN_OR_RETURN(config.policy.kind, ParseAggregation(o.agg));
  }
  if (!o.poison.empty()) {
    ASSIGN_OR_RETURN(config.poison, ParsePoisonFlag(o.poison));
  }
  if (!o.positive.empty()) {
    ASSIGN_OR_RETURN(config.positive_action, ParseAction(o.positive));
  }
  RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

std::string OutDir(const Overrides& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return kDefaultOutDir;
}

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create '", dir, "': ", ec.message()));
  }
  return absl::OkStatus();
}

// Runs one experiment and writes report.json, rounds.csv, transcript.csv and
// config.txt into `dir`.
absl::StatusOr<ExperimentReport> RunAndWrite(const ExperimentConfig& config,
                                             const std::string& dir) {
  std::vector<Message> transcript;
  ASSIGN_OR_RETURN(ExperimentReport report, RunExperiment(config, {}, &transcript));
  RETURN_IF_ERROR(EnsureDir(dir));
  const fs::path base(dir);
  RETURN_IF_ERROR(
      ExportReport(report, (base / "report.json").string(), ReportFormat::kStructured));
  RETURN_IF_ERROR(ExportReport(report, (base / "rounds.csv").string(), ReportFormat::kRows));
  RETURN_IF_ERROR(WriteTextFile((base / "transcript.csv").string(), TranscriptCsv(transcript)));
  RETURN_IF_ERROR(WriteTextFile((base / "config.txt").string(), CanonicalConfigText(config)));
  return report;
}

std::string Summary(const ExperimentReport& r) {
  return absl::StrFormat("mode=%s agg=%s rounds=%d precision=%.4f recall=%.4f f1=%.4f bytes=%d",
                         ModeName(r.mode), AggregationName(r.aggregation), r.rounds.size(),
                         r.final_macro_precision, r.final_macro_recall, r.final_macro_f1,
                         r.cumulative_bytes);
}

// Invalid input (bad config, unknown names, missing files) is a usage error;
// anything else is a runtime failure.
int ExitCodeFor(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

int Fail(std::ostream& err, const absl::Status& s) {
  err << "fedmon: " << s.message() << "\n";
  return ExitCodeFor(s);
}

int CmdValidate(const std::string& path, const Overrides& o, std::ostream& out,
                std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = LoadWithOverrides(path, o);
  if (!config.ok()) return Fail(err, config.status());
  out << "ok " << path << " fingerprint=" << ConfigFingerprint(*config) << "\n";
  if (absl::StatusOr<int64_t> bytes = PredictBandwidth(*config); bytes.ok()) {
    out << "predicted_bytes=" << *bytes << "\n";
  }
  return kExitOk;
}

int CmdRun(const std::string& path, const Overrides& o, std::ostream& out,
           std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = LoadWithOverrides(path, o);
  if (!config.ok()) return Fail(err, config.status());
  const std::string dir = OutDir(o);
  absl::StatusOr<ExperimentReport> report = RunAndWrite(*config, dir);
  if (!report.ok()) return Fail(err, report.status());
  out << Summary(*report) << "\n";
  for (const std::string& w : report->warnings) out << "warning: " << w << "\n";
  out << "wrote " << dir << "\n";
  return kExitOk;
}

int CmdCompare(const std::string& path_a, const std::string& path_b, const Overrides& o,
               std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> a = LoadWithOverrides(path_a, o);
  if (!a.ok()) return Fail(err, a.status());
  absl::StatusOr<ExperimentConfig> b = LoadWithOverrides(path_b, o);
  if (!b.ok()) return Fail(err, b.status());
  const fs::path dir(OutDir(o));
  absl::StatusOr<ExperimentReport> ra = RunAndWrite(*a, (dir / "a").string());
  if (!ra.ok()) return Fail(err, ra.status());
  absl::StatusOr<ExperimentReport> rb = RunAndWrite(*b, (dir / "b").string());
  if (!rb.ok()) return Fail(err, rb.status());

  std::string csv = "metric,a,b,delta\n";
  auto row = [&](absl::string_view name, double va, double vb) {
    out << absl::StrFormat("%-16s %16.10g %16.10g %+16.10g\n", name, va, vb, va - vb);
    absl::StrAppend(&csv, name, ",", FormatDouble(va), ",", FormatDouble(vb), ",",
                    FormatDouble(va - vb), "\n");
  };
  out << "a: " << Summary(*ra) << "\n" << "b: " << Summary(*rb) << "\n";
  row("precision", ra->final_macro_precision, rb->final_macro_precision);
  row("recall", ra->final_macro_recall, rb->final_macro_recall);
  row("f1", ra->final_macro_f1, rb->final_macro_f1);
  row("bytes", static_cast<double>(ra->cumulative_bytes),
      static_cast<double>(rb->cumulative_bytes));
  if (rb->cumulative_bytes > 0) {
    const double ratio = static_cast<double>(ra->cumulative_bytes) /
                         static_cast<double>(rb->cumulative_bytes);
    out << "bandwidth_ratio=" << FormatDouble(ratio) << "\n";
    absl::StrAppend(&csv, "bandwidth_ratio,,,", FormatDouble(ratio), "\n");
  } else {
    out << "bandwidth_ratio=undefined\n";
  }
  if (absl::Status s = WriteTextFile((dir / "compare.csv").string(), csv); !s.ok()) {
    return Fail(err, s);
  }
  return kExitOk;
}

int CmdSweep(const std::string& path, const std::string& param, const Overrides& o,
             std::ostream& out, std::ostream& err) {
  std::pair<std::string, std::string> kv = absl::StrSplit(param, absl::MaxSplits('=', 1));
  const std::vector<std::string> values =
      absl::StrSplit(kv.second, ',', absl::SkipWhitespace());
  if (kv.first.empty() || values.empty()) {
    err << "fedmon: --param expects key=v1,v2,...\n";
    return kExitUsage;
  }
  absl::StatusOr<ExperimentConfig> base = LoadWithOverrides(path, o);
  if (!base.ok()) return Fail(err, base.status());

  std::vector<ExperimentConfig> grid;
  for (const std::string& v : values) {
    ExperimentConfig c = *base;
    absl::Status s = ApplyConfigValue(c, kv.first, absl::StripAsciiWhitespace(v));
    if (s.ok()) s = ValidateConfig(c);
    if (!s.ok()) return Fail(err, s);
    grid.push_back(std::move(c));
  }
  const fs::path dir(OutDir(o));
  std::string csv = "param,value,precision,recall,f1,bytes,fingerprint\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    const std::string sub = absl::StrCat(kv.first, "=", values[i]);
    absl::StatusOr<ExperimentReport> r = RunAndWrite(grid[i], (dir / sub).string());
    if (!r.ok()) return Fail(err, r.status());
    out << sub << " " << Summary(*r) << "\n";
    absl::StrAppend(&csv, kv.first, ",", values[i], ",",
                    FormatDouble(r->final_macro_precision), ",",
                    FormatDouble(r->final_macro_recall), ",",
                    FormatDouble(r->final_macro_f1), ",", r->cumulative_bytes, ",",
                    r->fingerprint, "\n");
  }
  if (absl::Status s = WriteTextFile((dir / "sweep.csv").string(), csv); !s.ok()) {
    return Fail(err, s);
  }
  return kExitOk;
}

int CmdDump(const std::string& path, int cluster, const std::string& split,
            const Overrides& o, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = LoadWithOverrides(path, o);
  if (!config.ok()) return Fail(err, config.status());
  absl::StatusOr<std::vector<TelemetryEvent>> stream =
      GenerateClusterStream(*config, cluster, split);
  if (!stream.ok()) return Fail(err, stream.status());
  absl::StatusOr<std::vector<EventWindow>> windows = WindowEvents(*stream, config->window);
  if (!windows.ok()) return Fail(err, windows.status());
  std::vector<FeatureVector> rows;
  for (const EventWindow& w : *windows) {
    absl::StatusOr<FeatureVector> fv = ExtractFeatures(w, config->features);
    if (!fv.ok()) return Fail(err, fv.status());
    rows.push_back(*std::move(fv));
  }
  const std::string dir = OutDir(o);
  if (absl::Status s = EnsureDir(dir); !s.ok()) return Fail(err, s);
  const std::string stem = absl::StrCat("cluster", cluster, "_", split);
  std::ostringstream events;
  WriteEventStream(*stream, events);
  std::ostringstream features;
  WriteFeatureCsv(rows, config->features, features);
  for (const auto& [name, text] :
       {std::pair{stem + "_events.csv", events.str()},
        std::pair{stem + "_features.csv", features.str()}}) {
    if (absl::Status s = WriteTextFile((fs::path(dir) / name).string(), text); !s.ok()) {
      return Fail(err, s);
    }
  }
  out << "wrote " << stream->size() << " events and " << rows.size() << " windows to "
      << dir << "\n";
  return kExitOk;
}

}  // namespace

absl::StatusOr<PoisonSpec> ParsePoisonFlag(absl::string_view text) {
  PoisonSpec spec;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(item, absl::MaxSplits('=', 1));
    const absl::string_view key = absl::StripAsciiWhitespace(kv.first);
    const absl::string_view value = absl::StripAsciiWhitespace(kv.second);
    bool ok = true;
    if (key == "client") {
      ok = absl::SimpleAtoi(value, &spec.client);
    } else if (key == "round") {
      ok = absl::SimpleAtoi(value, &spec.start_round);
    } else if (key == "mode") {
      ASSIGN_OR_RETURN(spec.mode, ParsePoisonMode(value));
    } else if (key == "factor") {
      ok = absl::SimpleAtod(value, &spec.factor) && std::isfinite(spec.factor);
    } else {
      return absl::InvalidArgumentError(absl::StrCat("--poison: unknown key '", key, "'"));
    }
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("--poison: bad value '", value, "' for ", key));
    }
  }
  return spec;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated multi-cluster anomaly detection simulator", "fedmon"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_a;
  std::string config_b;
  std::string param;
  int cluster = 0;
  std::string split = "eval";

  CLI::App* run = app.add_subcommand("run", "Run an experiment and write its report");
  run->add_option("config", config_a, "Configuration file")->required();
  AddOverrideFlags(run, o);

  CLI::App* compare = app.add_subcommand("compare", "Run two configs and diff them");
  compare->add_option("config_a", config_a, "First configuration")->required();
  compare->add_option("config_b", config_b, "Second configuration")->required();
  AddOverrideFlags(compare, o);

  CLI::App* sweep = app.add_subcommand("sweep", "Grid over one configuration key");
  sweep->add_option("config", config_a, "Configuration file")->required();
  sweep->add_option("--param", param, "key=v1,v2,...")->required();
  AddOverrideFlags(sweep, o);

  CLI::App* validate = app.add_subcommand("validate", "Check a configuration file");
  validate->add_option("config", config_a, "Configuration file")->required();
  AddOverrideFlags(validate, o);

  CLI::App* dump = app.add_subcommand("dump", "Write one stream's events and features");
  dump->add_option("config", config_a, "Configuration file")->required();
  dump->add_option("--cluster", cluster, "Cluster index")->check(CLI::NonNegativeNumber);
  dump->add_option("--split", split, "train | validation | eval");
  AddOverrideFlags(dump, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fedmon: " << e.what() << "\n";
    return kExitUsage;
  }

  if (run->parsed()) return CmdRun(config_a, o, out, err);
  if (compare->parsed()) return CmdCompare(config_a, config_b, o, out, err);
  if (sweep->parsed()) return CmdSweep(config_a, param, o, out, err);
  if (validate->parsed()) return CmdValidate(config_a, o, out, err);
  if (dump->parsed()) return CmdDump(config_a, cluster, split, o, out, err);
  return kExitUsage;
}

}  // namespace fedmon
