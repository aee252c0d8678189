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

// Python bindings. Configurations travel as key = value text and reports as
// JSON so the Python side needs no mirror of the C++ structs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmon/aggregation.h"
#include "fedmon/config.h"
#include "fedmon/harness.h"
#include "fedmon/metrics.h"
#include "fedmon/report.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace fedmon {
namespace {

namespace py = pybind11;

void ThrowIfError(const absl::Status& status) {
  if (status.ok()) return;
  const std::string msg(status.message());
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      throw py::value_error(msg);
    case absl::StatusCode::kNotFound:
      throw py::key_error(msg);
    default:
      throw std::runtime_error(msg);
  }
}

template <typename T>
T ValueOrThrow(absl::StatusOr<T> v) {
  ThrowIfError(v.status());
  return *std::move(v);
}

ExperimentConfig ConfigFromText(const std::string& text) {
  ExperimentConfig config = ValueOrThrow(ParseConfig(text));
  ThrowIfError(ValidateConfig(config));
  return config;
}

std::vector<ModelUpdate> MakeUpdates(const std::vector<std::vector<double>>& deltas,
                                     const std::vector<int64_t>& n_samples) {
  if (!n_samples.empty() && n_samples.size() != deltas.size()) {
    throw py::value_error("n_samples must match the number of deltas");
  }
  std::vector<ModelUpdate> updates(deltas.size());
  for (size_t i = 0; i < deltas.size(); ++i) {
    updates[i].delta = deltas[i];
    updates[i].cluster_id = static_cast<int32_t>(i);
    updates[i].n_samples = n_samples.empty() ? 1 : n_samples[i];
  }
  return updates;
}

py::dict MetricsDict(const Metrics& m) {
  py::dict d;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["f1"] = m.f1;
  d["tp"] = m.counts.tp;
  d["fp"] = m.counts.fp;
  d["tn"] = m.counts.tn;
  d["fn"] = m.counts.fn;
  return d;
}

PYBIND11_MODULE(_fedmon, m) {
  m.doc() = "Federated runtime anomaly detection simulator";

  m.def(
      "canonical_config",
      [](const std::string& text) { return CanonicalConfigText(ConfigFromText(text)); },
      py::arg("text") = "", "Validated config in canonical key = value form.");
  m.def(
      "config_fingerprint",
      [](const std::string& text) { return ConfigFingerprint(ConfigFromText(text)); },
      py::arg("text") = "");
  m.def(
      "predict_bandwidth",
      [](const std::string& text) { return ValueOrThrow(PredictBandwidth(ConfigFromText(text))); },
      py::arg("text") = "", "Total bytes a run of this config will transmit.");
  m.def(
      "run_experiment_json",
      [](const std::string& text) {
        const ExperimentConfig config = ConfigFromText(text);
        std::vector<Message> transcript;
        absl::StatusOr<ExperimentReport> report;
        {
          py::gil_scoped_release release;
          report = RunExperiment(config, {}, &transcript);
        }
        ThrowIfError(report.status());
        return py::make_tuple(ReportToJson(*report), TranscriptCsv(transcript));
      },
      py::arg("text") = "", "Runs an experiment; returns (report JSON, transcript CSV).");

  m.def(
      "metrics_from_counts",
      [](int64_t tp, int64_t fp, int64_t tn, int64_t fn) {
        return MetricsDict(MetricsFromCounts({tp, fp, tn, fn}));
      },
      py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));

  m.def(
      "clip",
      [](const std::vector<double>& delta, double clip_norm) {
        ModelUpdate u;
        u.delta = delta;
        return ValueOrThrow(ClipUpdate(u, clip_norm)).delta;
      },
      py::arg("delta"), py::arg("clip_norm"));
  m.def(
      "fedavg",
      [](const std::vector<std::vector<double>>& deltas, const std::vector<int64_t>& n_samples) {
        return ValueOrThrow(FedAvg(MakeUpdates(deltas, n_samples)));
      },
      py::arg("deltas"), py::arg("n_samples") = std::vector<int64_t>{});
  m.def(
      "krum",
      [](const std::vector<std::vector<double>>& deltas, int f) {
        const KrumResult r = ValueOrThrow(Krum(MakeUpdates(deltas, {}), f));
        return py::make_tuple(r.selected, r.scores);
      },
      py::arg("deltas"), py::arg("f") = 1,
      "Returns (selected index, per-update scores).");
}

}  // namespace
}  // namespace fedmon
