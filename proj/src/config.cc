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

#include "fedmon/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fedmon/random.h"

namespace fedmon {

absl::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kFedMon:
      return "fedmon";
    case Mode::kIsolated:
      return "isolated";
    case Mode::kCentralized:
      return "centralized";
  }
  return "unknown";
}

absl::StatusOr<Mode> ParseMode(absl::string_view name) {
  if (name == "fedmon") return Mode::kFedMon;
  if (name == "isolated") return Mode::kIsolated;
  if (name == "centralized") return Mode::kCentralized;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mode '", name, "' (fedmon, isolated, centralized)"));
}

absl::string_view PoisonModeName(PoisonMode mode) {
  switch (mode) {
    case PoisonMode::kSignFlip:
      return "signflip";
    case PoisonMode::kScale:
      return "scale";
    case PoisonMode::kRandomNoise:
      return "randomnoise";
  }
  return "unknown";
}

absl::StatusOr<PoisonMode> ParsePoisonMode(absl::string_view name) {
  if (name == "signflip") return PoisonMode::kSignFlip;
  if (name == "scale") return PoisonMode::kScale;
  if (name == "randomnoise") return PoisonMode::kRandomNoise;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown poison mode '", name, "' (signflip, scale, randomnoise)"));
}

ClusterSpec DefaultClusterSpec(int k) {
  switch (k % 3) {
    case 0:
      return {{{"nginx", 1.4}, {"redis", 0.6}}, Label::kCryptoMining};
    case 1:
      return {{{"redis", 1.4}, {"nginx", 0.6}}, Label::kExfiltration};
    default:
      return {{{"nginx", 1.0}, {"redis", 1.0}}, Label::kReverseShell};
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

absl::StatusOr<int64_t> ParseInt(absl::string_view key, absl::string_view value) {
  int64_t v = 0;
  if (!absl::SimpleAtoi(value, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an integer, got '", value, "'"));
  }
  return v;
}

absl::StatusOr<double> ParseReal(absl::string_view key, absl::string_view value) {
  double v = 0.0;
  if (!absl::SimpleAtod(value, &v) || !std::isfinite(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected a finite number, got '", value, "'"));
  }
  return v;
}

absl::StatusOr<bool> ParseBool(absl::string_view key, absl::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  return absl::InvalidArgumentError(
      absl::StrCat(key, ": expected true or false, got '", value, "'"));
}

struct Field {
  absl::string_view key;
  std::function<absl::Status(ExperimentConfig&, absl::string_view, absl::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field IntField(absl::string_view key, T ExperimentConfig::*member) {
  return {key,
          [member](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
            absl::StatusOr<int64_t> x = ParseInt(k, v);
            if (!x.ok()) return x.status();
            c.*member = static_cast<T>(*x);
            return absl::OkStatus();
          },
          [member](const ExperimentConfig& c) { return absl::StrCat(c.*member); }};
}

Field RealField(absl::string_view key, double ExperimentConfig::*member) {
  return {key,
          [member](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
            absl::StatusOr<double> x = ParseReal(k, v);
            if (!x.ok()) return x.status();
            c.*member = *x;
            return absl::OkStatus();
          },
          [member](const ExperimentConfig& c) { return FormatDouble(c.*member); }};
}

// Every scalar key, in canonical order. Poison and per-cluster keys are
// handled separately.
const std::vector<Field>& Fields() {
  static const std::vector<Field>* fields = new std::vector<Field>{
      {"experiment.mode",
       [](ExperimentConfig& c, absl::string_view, absl::string_view v) {
         absl::StatusOr<Mode> m = ParseMode(v);
         if (!m.ok()) return m.status();
         c.mode = *m;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return std::string(ModeName(c.mode)); }},
      IntField("experiment.rounds", &ExperimentConfig::rounds),
      {"experiment.seed",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         uint64_t s = 0;
         if (!absl::SimpleAtoi(v, &s)) {
           return absl::InvalidArgumentError(
               absl::StrCat(k, ": expected an unsigned integer, got '", v, "'"));
         }
         c.seed = s;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.seed); }},
      IntField("fl.local_epochs", &ExperimentConfig::local_epochs),
      {"fl.aggregation",
       [](ExperimentConfig& c, absl::string_view, absl::string_view v) {
         absl::StatusOr<AggregationKind> a = ParseAggregation(v);
         if (!a.ok()) return a.status();
         c.policy.kind = *a;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) {
         return std::string(AggregationName(c.policy.kind));
       }},
      {"fl.krum_f",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.policy.byzantine_f = static_cast<int>(*x);
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.policy.byzantine_f); }},
      {"fl.multikrum_m",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.policy.multikrum_m = static_cast<int>(*x);
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.policy.multikrum_m); }},
      {"fl.clip_norm",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         if (v == "none") {
           c.policy.clip_norm.reset();
           return absl::OkStatus();
         }
         absl::StatusOr<double> x = ParseReal(k, v);
         if (!x.ok()) return x.status();
         c.policy.clip_norm = *x;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) {
         return c.policy.clip_norm.has_value() ? FormatDouble(*c.policy.clip_norm)
                                               : std::string("none");
       }},
      {"fl.dp_sigma",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<double> x = ParseReal(k, v);
         if (!x.ok()) return x.status();
         c.policy.dp_sigma = *x;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return FormatDouble(c.policy.dp_sigma); }},
      RealField("fl.server_lr", &ExperimentConfig::server_lr),
      {"fl.secure_aggregation",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<bool> b = ParseBool(k, v);
         if (!b.ok()) return b.status();
         c.secure_aggregation = *b;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) {
         return std::string(c.secure_aggregation ? "true" : "false");
       }},
      RealField("fl.mask_scale", &ExperimentConfig::mask_scale),
      IntField("data.train_events", &ExperimentConfig::train_events),
      IntField("data.validation_events", &ExperimentConfig::validation_events),
      IntField("data.eval_events", &ExperimentConfig::eval_events),
      RealField("attack.train_start", &ExperimentConfig::train_attack_start),
      RealField("attack.train_duration", &ExperimentConfig::train_attack_duration),
      RealField("attack.train_intensity", &ExperimentConfig::train_attack_intensity),
      RealField("attack.eval_first_start", &ExperimentConfig::eval_attack_first_start),
      RealField("attack.eval_spacing", &ExperimentConfig::eval_attack_spacing),
      RealField("attack.eval_duration", &ExperimentConfig::eval_attack_duration),
      RealField("attack.eval_intensity", &ExperimentConfig::eval_attack_intensity),
      {"window.mode",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         if (v == "count") {
           c.window.mode = WindowMode::kCount;
         } else if (v == "time") {
           c.window.mode = WindowMode::kTime;
         } else {
           return absl::InvalidArgumentError(
               absl::StrCat(k, ": expected count or time, got '", v, "'"));
         }
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) {
         return std::string(c.window.mode == WindowMode::kCount ? "count" : "time");
       }},
      {"window.size",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.window.size = *x;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.window.size); }},
      {"window.stride",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.window.stride = *x;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.window.stride); }},
      {"features.ngram",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.features.ngram = static_cast<int>(*x);
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.features.ngram); }},
      {"features.buckets",
       [](ExperimentConfig& c, absl::string_view k, absl::string_view v) {
         absl::StatusOr<int64_t> x = ParseInt(k, v);
         if (!x.ok()) return x.status();
         c.features.buckets = static_cast<int>(*x);
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) { return absl::StrCat(c.features.buckets); }},
      IntField("model.hidden", &ExperimentConfig::hidden_dim),
      IntField("model.latent", &ExperimentConfig::latent_dim),
      RealField("model.learning_rate", &ExperimentConfig::learning_rate),
      RealField("model.beta", &ExperimentConfig::beta),
      IntField("model.batch_size", &ExperimentConfig::batch_size),
      RealField("model.recon_temperature", &ExperimentConfig::recon_temperature),
      IntField("model.eval_samples", &ExperimentConfig::eval_samples),
      IntField("detect.iforest_trees", &ExperimentConfig::iforest_trees),
      IntField("detect.iforest_psi", &ExperimentConfig::iforest_psi),
      RealField("detect.fusion_weight", &ExperimentConfig::fusion_weight),
      RealField("detect.benign_quantile", &ExperimentConfig::benign_quantile),
      RealField("detect.log_quantile", &ExperimentConfig::log_quantile),
      RealField("detect.throttle_margin", &ExperimentConfig::throttle_margin),
      RealField("detect.block_margin", &ExperimentConfig::block_margin),
      {"detect.positive_action",
       [](ExperimentConfig& c, absl::string_view, absl::string_view v) {
         absl::StatusOr<Action> a = ParseAction(v);
         if (!a.ok()) return a.status();
         c.positive_action = *a;
         return absl::OkStatus();
       },
       [](const ExperimentConfig& c) {
         return std::string(ActionName(c.positive_action));
       }},
      IntField("detect.suppression_windows", &ExperimentConfig::suppression_windows),
  };
  return *fields;
}

absl::Status SetPoison(ExperimentConfig& c, absl::string_view field,
                       absl::string_view key, absl::string_view value) {
  if (field == "enabled") {
    absl::StatusOr<bool> b = ParseBool(key, value);
    if (!b.ok()) return b.status();
    if (*b && !c.poison.has_value()) c.poison = PoisonSpec{};
    if (!*b) c.poison.reset();
    return absl::OkStatus();
  }
  if (!c.poison.has_value()) c.poison = PoisonSpec{};
  if (field == "client" || field == "start_round") {
    absl::StatusOr<int64_t> x = ParseInt(key, value);
    if (!x.ok()) return x.status();
    (field == "client" ? c.poison->client : c.poison->start_round) =
        static_cast<int>(*x);
    return absl::OkStatus();
  }
  if (field == "mode") {
    absl::StatusOr<PoisonMode> m = ParsePoisonMode(value);
    if (!m.ok()) return m.status();
    c.poison->mode = *m;
    return absl::OkStatus();
  }
  if (field == "factor") {
    absl::StatusOr<double> x = ParseReal(key, value);
    if (!x.ok()) return x.status();
    c.poison->factor = *x;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key, "'"));
}

absl::StatusOr<std::vector<WorkloadShare>> ParseWorkloads(absl::string_view key,
                                                          absl::string_view value) {
  std::vector<WorkloadShare> shares;
  for (absl::string_view item : absl::StrSplit(value, ',', absl::SkipWhitespace())) {
    item = absl::StripAsciiWhitespace(item);
    std::pair<absl::string_view, absl::string_view> parts =
        absl::StrSplit(item, absl::MaxSplits(':', 1));
    WorkloadShare share;
    share.profile = std::string(parts.first);
    if (!BuiltinProfile(share.profile).ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": unknown workload profile '", parts.first, "'"));
    }
    if (!parts.second.empty()) {
      absl::StatusOr<double> scale = ParseReal(key, parts.second);
      if (!scale.ok()) return scale.status();
      share.rate_scale = *scale;
    }
    shares.push_back(std::move(share));
  }
  if (shares.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": no workloads listed"));
  }
  return shares;
}

absl::Status SetCluster(ExperimentConfig& c, absl::string_view rest,
                        absl::string_view key, absl::string_view value) {
  std::pair<absl::string_view, absl::string_view> parts =
      absl::StrSplit(rest, absl::MaxSplits('.', 1));
  int index = 0;
  if (!absl::SimpleAtoi(parts.first, &index) || index < 0) {
    return absl::InvalidArgumentError(absl::StrCat("bad cluster index in '", key, "'"));
  }
  if (index >= c.n_clusters()) {
    return absl::InvalidArgumentError(absl::StrCat(
        key, ": cluster ", index, " but experiment.n_clusters = ", c.n_clusters()));
  }
  if (parts.second == "workloads") {
    absl::StatusOr<std::vector<WorkloadShare>> w = ParseWorkloads(key, value);
    if (!w.ok()) return w.status();
    c.clusters[index].workloads = *std::move(w);
    return absl::OkStatus();
  }
  if (parts.second == "attack") {
    absl::StatusOr<Label> a = ParseAttackKind(value);
    if (!a.ok()) return a.status();
    c.clusters[index].attack = *a;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key, "'"));
}

}  // namespace

absl::Status ApplyConfigValue(ExperimentConfig& config, absl::string_view key,
                              absl::string_view value) {
  if (key == "experiment.n_clusters") {
    absl::StatusOr<int64_t> n = ParseInt(key, value);
    if (!n.ok()) return n.status();
    if (*n < 1 || *n > 64) {
      return absl::InvalidArgumentError("experiment.n_clusters must lie in [1, 64]");
    }
    const int old = config.n_clusters();
    config.clusters.resize(static_cast<size_t>(*n));
    for (int k = old; k < *n; ++k) config.clusters[k] = DefaultClusterSpec(k);
    return absl::OkStatus();
  }
  if (absl::ConsumePrefix(&key, "poison.")) {
    return SetPoison(config, key, absl::StrCat("poison.", key), value);
  }
  if (absl::string_view rest = key; absl::ConsumePrefix(&rest, "cluster.")) {
    return SetCluster(config, rest, key, value);
  }
  for (const Field& f : Fields()) {
    if (f.key == key) return f.set(config, key, value);
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key, "'"));
}

absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (const size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected 'key = value'"));
    }
    entries.emplace_back(std::string(absl::StripAsciiWhitespace(line.substr(0, eq))),
                         std::string(absl::StripAsciiWhitespace(line.substr(eq + 1))));
  }
  ExperimentConfig config;
  for (const auto& [key, value] : entries) {
    if (key == "experiment.n_clusters") {
      if (absl::Status s = ApplyConfigValue(config, key, value); !s.ok()) return s;
    }
  }
  for (const auto& [key, value] : entries) {
    if (key == "experiment.n_clusters") continue;
    if (absl::Status s = ApplyConfigValue(config, key, value); !s.ok()) return s;
  }
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<ExperimentConfig> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string CanonicalConfigText(const ExperimentConfig& c) {
  std::string out;
  absl::StrAppend(&out, "experiment.n_clusters = ", c.n_clusters(), "\n");
  for (const Field& f : Fields()) absl::StrAppend(&out, f.key, " = ", f.get(c), "\n");
  absl::StrAppend(&out, "poison.enabled = ", c.poison.has_value() ? "true" : "false", "\n");
  if (c.poison.has_value()) {
    absl::StrAppend(&out, "poison.client = ", c.poison->client, "\n");
    absl::StrAppend(&out, "poison.start_round = ", c.poison->start_round, "\n");
    absl::StrAppend(&out, "poison.mode = ", PoisonModeName(c.poison->mode), "\n");
    absl::StrAppend(&out, "poison.factor = ", FormatDouble(c.poison->factor), "\n");
  }
  for (int k = 0; k < c.n_clusters(); ++k) {
    std::vector<std::string> items;
    for (const WorkloadShare& w : c.clusters[k].workloads) {
      items.push_back(absl::StrCat(w.profile, ":", FormatDouble(w.rate_scale)));
    }
    absl::StrAppend(&out, "cluster.", k, ".workloads = ", absl::StrJoin(items, ","), "\n");
    absl::StrAppend(&out, "cluster.", k, ".attack = ", LabelName(c.clusters[k].attack), "\n");
  }
  return out;
}

std::string ConfigFingerprint(const ExperimentConfig& config) {
  return absl::StrFormat("%016x", HashLabel(CanonicalConfigText(config)));
}

absl::Status ValidateConfig(const ExperimentConfig& c) {
  auto fail = [](auto&&... parts) {
    return absl::InvalidArgumentError(absl::StrCat(parts...));
  };
  if (c.rounds < 0) return fail("experiment.rounds must be non-negative");
  if (c.n_clusters() < 1) return fail("at least one cluster is required");
  if (c.local_epochs < 1) return fail("fl.local_epochs must be at least 1");
  if (!(c.server_lr >= 0.0)) return fail("fl.server_lr must be non-negative");
  if (!(c.mask_scale > 0.0)) return fail("fl.mask_scale must be positive");
  if (absl::Status s = ValidatePolicy(c.policy, c.n_clusters());
      !s.ok() && c.mode != Mode::kIsolated && c.mode != Mode::kCentralized) {
    return s;
  }
  if (c.policy.clip_norm.has_value() && !(*c.policy.clip_norm > 0.0)) {
    return fail("fl.clip_norm must be positive or none");
  }
  if (!(c.policy.dp_sigma >= 0.0)) return fail("fl.dp_sigma must be non-negative");
  if (c.poison.has_value()) {
    if (c.poison->client < 0 || c.poison->client >= c.n_clusters()) {
      return fail("poison.client ", c.poison->client, " is not a cluster index");
    }
    if (c.poison->start_round < 1) return fail("poison.start_round must be >= 1");
  }
  if (c.train_events < 2 * c.window.stride || c.validation_events < 2 * c.window.stride ||
      c.eval_events < c.window.stride) {
    return fail("stream sizes are too small for the window stride");
  }
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(c.train_attack_start) || !(c.train_attack_duration > 0.0) ||
      c.train_attack_start + c.train_attack_duration > 0.95) {
    return fail("training attack interval must lie within [0, 0.95] of the stream");
  }
  if (!(c.train_attack_intensity > 0.0 && c.train_attack_intensity <= 1.0) ||
      !(c.eval_attack_intensity > 0.0 && c.eval_attack_intensity <= 1.0)) {
    return fail("attack intensities must lie in (0, 1]");
  }
  if (!(c.eval_attack_duration > 0.0) || c.eval_attack_first_start < 0.0 ||
      c.eval_attack_spacing < c.eval_attack_duration ||
      c.eval_attack_first_start + 2 * c.eval_attack_spacing + c.eval_attack_duration >
          0.95) {
    return fail("evaluation attack intervals must be disjoint and within [0, 0.95]");
  }
  if (absl::Status s = ValidateWindowSpec(c.window); !s.ok()) return s;
  if (c.features.vocab_size != kVocabSize) return fail("vocabulary size is fixed at ", kVocabSize);
  if (c.features.ngram < 1 || c.features.buckets < 1) {
    return fail("features.ngram and features.buckets must be positive");
  }
  if (c.hidden_dim < 1 || c.latent_dim < 1) return fail("model dimensions must be positive");
  if (!(c.learning_rate >= 0.0)) return fail("model.learning_rate must be non-negative");
  if (!(c.beta >= 0.0)) return fail("model.beta must be non-negative");
  if (c.batch_size < 1) return fail("model.batch_size must be positive");
  if (!(c.recon_temperature > 0.0)) return fail("model.recon_temperature must be positive");
  if (c.eval_samples < 1) return fail("model.eval_samples must be positive");
  if (c.iforest_trees < 1 || c.iforest_psi < 2) {
    return fail("detect.iforest_trees >= 1 and detect.iforest_psi >= 2 required");
  }
  if (!in_unit(c.fusion_weight)) return fail("detect.fusion_weight must lie in [0, 1]");
  if (!(c.benign_quantile > 0.0 && c.benign_quantile <= 1.0) || !in_unit(c.log_quantile)) {
    return fail("detect quantiles must lie in (0, 1]");
  }
  if (!in_unit(c.throttle_margin) || !in_unit(c.block_margin) ||
      c.throttle_margin > c.block_margin) {
    return fail("detect margins must satisfy 0 <= throttle <= block <= 1");
  }
  if (c.suppression_windows < 0) return fail("detect.suppression_windows must be >= 0");
  for (int k = 0; k < c.n_clusters(); ++k) {
    if (c.clusters[k].workloads.empty()) return fail("cluster ", k, " has no workloads");
    for (const WorkloadShare& w : c.clusters[k].workloads) {
      if (!BuiltinProfile(w.profile).ok()) {
        return fail("cluster ", k, ": unknown profile '", w.profile, "'");
      }
      if (!(w.rate_scale > 0.0)) return fail("cluster ", k, ": rate scale must be positive");
    }
    if (c.clusters[k].attack == Label::kBenign) {
      return fail("cluster ", k, ": attack kind must not be benign");
    }
  }
  return absl::OkStatus();
}

}  // namespace fedmon
