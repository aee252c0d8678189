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

#include "fedmon/features.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "absl/strings/str_cat.h"

namespace fedmon {

absl::Status ValidateWindowSpec(const WindowSpec& spec) {
  if (spec.size <= 0 || spec.stride <= 0) {
    return absl::InvalidArgumentError("window size and stride must be positive");
  }
  if (spec.stride > spec.size) {
    return absl::InvalidArgumentError(absl::StrCat(
        "window stride ", spec.stride, " exceeds size ", spec.size));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<EventWindow>> WindowEvents(
    std::span<const TelemetryEvent> stream, const WindowSpec& spec) {
  if (absl::Status s = ValidateWindowSpec(spec); !s.ok()) return s;
  std::vector<EventWindow> windows;
  const auto n = static_cast<int64_t>(stream.size());
  if (n == 0) return windows;

  if (spec.mode == WindowMode::kCount) {
    for (int64_t begin = 0; begin < n; begin += spec.stride) {
      const int64_t end = std::min(begin + spec.size, n);
      windows.push_back(stream.subspan(begin, end - begin));
    }
    return windows;
  }

  const int64_t t0 = stream.front().timestamp_us;
  const int64_t t_last = stream.back().timestamp_us;
  auto lower = stream.begin();
  for (int64_t start = t0; start <= t_last; start += spec.stride) {
    lower = std::lower_bound(lower, stream.end(), start,
                             [](const TelemetryEvent& e, int64_t t) {
                               return e.timestamp_us < t;
                             });
    auto upper = std::lower_bound(lower, stream.end(), start + spec.size,
                                  [](const TelemetryEvent& e, int64_t t) {
                                    return e.timestamp_us < t;
                                  });
    if (upper != lower) {
      windows.push_back(stream.subspan(lower - stream.begin(), upper - lower));
    }
  }
  return windows;
}

int64_t CountModeWindowCount(int64_t n_events, const WindowSpec& spec) {
  if (n_events <= 0) return 0;
  return (n_events + spec.stride - 1) / spec.stride;
}

uint64_t NgramHash(std::span<const int32_t> ids) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (int32_t id : ids) {
    const auto u = static_cast<uint32_t>(id);
    for (int shift = 0; shift < 32; shift += 8) {
      h ^= (u >> shift) & 0xFFu;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

absl::StatusOr<FeatureVector> ExtractFeatures(EventWindow window,
                                              const FeatureConfig& config) {
  if (window.empty()) {
    return absl::InvalidArgumentError("cannot featurize an empty window");
  }
  if (config.vocab_size <= 0 || config.ngram <= 0 || config.buckets <= 0) {
    return absl::InvalidArgumentError("feature config dimensions must be positive");
  }
  FeatureVector fv;
  fv.cluster_id = window.front().cluster_id;
  fv.values.assign(FeatureDim(config), 0.0);
  double* hist = fv.values.data();
  double* temporal = hist + config.vocab_size;
  double* ngrams = temporal + kTemporalDims;

  std::vector<int32_t> syscalls;
  syscalls.reserve(window.size());
  std::array<int64_t, kNumLabels> label_counts{};
  int64_t net_events = 0;
  double bytes_total = 0.0;
  for (const TelemetryEvent& e : window) {
    ++label_counts[static_cast<int>(e.label)];
    if (e.kind == EventKind::kSyscall) {
      if (e.syscall_id < 0 || e.syscall_id >= config.vocab_size) {
        return absl::OutOfRangeError(absl::StrCat(
            "syscall id ", e.syscall_id, " outside vocabulary of ",
            config.vocab_size));
      }
      syscalls.push_back(e.syscall_id);
    } else {
      ++net_events;
      bytes_total += static_cast<double>(e.bytes_out);
    }
  }

  if (!syscalls.empty()) {
    for (int32_t id : syscalls) hist[id] += 1.0;
    const auto total = static_cast<double>(syscalls.size());
    for (int i = 0; i < config.vocab_size; ++i) hist[i] /= total;
  }

  const auto n = static_cast<double>(window.size());
  const int64_t span_us =
      window.back().timestamp_us - window.front().timestamp_us + 1;
  temporal[0] = n / (static_cast<double>(span_us) * 1e-6);
  temporal[1] = static_cast<double>(net_events) / n;
  temporal[2] = net_events > 0 ? bytes_total / static_cast<double>(net_events) : 0.0;
  if (window.size() >= 2) {
    const double m = static_cast<double>(span_us - 1) / (n - 1.0);
    double ss = 0.0;
    for (size_t i = 1; i < window.size(); ++i) {
      const double gap = static_cast<double>(window[i].timestamp_us -
                                             window[i - 1].timestamp_us);
      ss += (gap - m) * (gap - m);
    }
    temporal[3] = std::sqrt(ss / (n - 1.0));
  }
  int64_t max_burst = 0;
  for (size_t lo = 0, hi = 0; hi < window.size(); ++hi) {
    while (window[hi].timestamp_us - window[lo].timestamp_us >= kBurstIntervalUs) ++lo;
    max_burst = std::max<int64_t>(max_burst, static_cast<int64_t>(hi - lo + 1));
  }
  temporal[4] = static_cast<double>(max_burst);

  const auto order = static_cast<size_t>(config.ngram);
  if (syscalls.size() >= order) {
    const size_t count = syscalls.size() - order + 1;
    for (size_t i = 0; i < count; ++i) {
      const uint64_t h = NgramHash(std::span<const int32_t>(syscalls).subspan(i, order));
      ngrams[h % static_cast<uint64_t>(config.buckets)] += 1.0;
    }
    for (int b = 0; b < config.buckets; ++b) ngrams[b] /= static_cast<double>(count);
  }

  // Plurality label; on ties the attack label wins (lowest attack code first).
  int best = 0;
  for (int l = 1; l < kNumLabels; ++l) {
    if (label_counts[l] > label_counts[best] ||
        (best == 0 && label_counts[l] > 0 && label_counts[l] == label_counts[0])) {
      best = l;
    }
  }
  fv.window_label = static_cast<Label>(best);
  return fv;
}

absl::StatusOr<NormStats> FitNorm(std::span<const FeatureVector> benign) {
  if (benign.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "normalization needs at least 2 windows, got ", benign.size()));
  }
  const size_t dim = benign.front().values.size();
  NormStats stats;
  stats.mean.assign(dim, 0.0);
  stats.stddev.assign(dim, 0.0);
  for (const FeatureVector& fv : benign) {
    if (fv.values.size() != dim) {
      return absl::InvalidArgumentError("feature vectors differ in dimension");
    }
    for (size_t d = 0; d < dim; ++d) stats.mean[d] += fv.values[d];
  }
  const auto n = static_cast<double>(benign.size());
  for (double& m : stats.mean) m /= n;
  for (const FeatureVector& fv : benign) {
    for (size_t d = 0; d < dim; ++d) {
      const double c = fv.values[d] - stats.mean[d];
      stats.stddev[d] += c * c;
    }
  }
  for (double& s : stats.stddev) s = std::max(std::sqrt(s / n), kStdFloor);
  return stats;
}

absl::StatusOr<FeatureVector> ApplyNorm(const FeatureVector& fv,
                                        const NormStats& stats) {
  if (fv.values.size() != stats.mean.size() ||
      stats.mean.size() != stats.stddev.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature dimension ", fv.values.size(), " does not match norm stats ",
        stats.mean.size()));
  }
  FeatureVector out = fv;
  for (size_t d = 0; d < out.values.size(); ++d) {
    out.values[d] = (fv.values[d] - stats.mean[d]) / stats.stddev[d];
  }
  return out;
}

std::vector<std::string> FeatureColumnNames(const FeatureConfig& config) {
  std::vector<std::string> names;
  names.reserve(FeatureDim(config));
  for (int i = 0; i < config.vocab_size; ++i) names.push_back(absl::StrCat("hist_", i));
  for (const char* n : {"rate", "net_frac", "bytes_mean", "iat_std", "burst"}) {
    names.emplace_back(n);
  }
  for (int i = 0; i < config.buckets; ++i) names.push_back(absl::StrCat("ng_", i));
  return names;
}

void WriteFeatureCsv(std::span<const FeatureVector> rows,
                     const FeatureConfig& config, std::ostream& out) {
  for (const std::string& name : FeatureColumnNames(config)) out << name << ',';
  out << "label\n";
  for (const FeatureVector& fv : rows) {
    for (double v : fv.values) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, res.ptr - buf) << ',';
    }
    out << static_cast<int>(fv.window_label) << '\n';
  }
}

}  // namespace fedmon
