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

#include "fedmon/telemetry.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "fedmon/random.h"

namespace fedmon {

const std::array<absl::string_view, kVocabSize> kSyscallNames = {
    "read",         "write",        "open",        "close",
    "stat",         "fstat",        "lstat",       "poll",
    "lseek",        "mmap",         "mprotect",    "munmap",
    "brk",          "rt_sigaction", "rt_sigprocmask", "ioctl",
    "pread64",      "pwrite64",     "readv",       "writev",
    "access",       "pipe",         "select",      "sched_yield",
    "mremap",       "msync",        "madvise",     "nanosleep",
    "getpid",       "sendfile",     "accept4",     "sendto",
    "recvfrom",     "sendmsg",      "recvmsg",     "shutdown",
    "bind",         "listen",       "getsockname", "setsockopt",
    "socket",       "connect",      "dup2",        "execve",
    "fork",         "clone",        "wait4",       "kill",
    "uname",        "fcntl",        "epoll_wait",  "epoll_ctl",
    "futex",        "clock_gettime", "gettimeofday", "getrusage",
    "sysinfo",      "times",        "getrandom",   "openat",
    "newfstatat",   "exit_group",   "unlink",      "rename",
};

namespace {

constexpr double kDistributionTolerance = 1e-9;
// Mass spread over every id except dup2 and execve, so that benign traffic
// touches most of the vocabulary occasionally.
constexpr double kBackgroundMass = 0.02;

std::vector<double> BuildDistribution(
    std::initializer_list<std::pair<int, double>> weights) {
  std::vector<double> dist(kVocabSize, 0.0);
  int background_ids = 0;
  for (int id = 0; id < kVocabSize; ++id) {
    if (id != 42 && id != 43) ++background_ids;
  }
  for (int id = 0; id < kVocabSize; ++id) {
    if (id != 42 && id != 43) dist[id] = kBackgroundMass / background_ids;
  }
  double foreground = 0.0;
  for (const auto& [id, w] : weights) foreground += w;
  for (const auto& [id, w] : weights) {
    dist[id] += (1.0 - kBackgroundMass) * w / foreground;
  }
  double total = 0.0;
  for (double p : dist) total += p;
  for (double& p : dist) p /= total;
  return dist;
}

int64_t BenignBytes(NetProto proto, RandomStream& rng) {
  double base = 0.0;
  switch (proto) {
    case NetProto::kDns:
      base = 64.0;
      break;
    case NetProto::kHttp:
      base = 512.0;
      break;
    case NetProto::kTcpOther:
      base = 256.0;
      break;
  }
  return static_cast<int64_t>(std::llround(base * std::exp(0.5 * rng.Gaussian())));
}

}  // namespace

absl::string_view LabelName(Label label) {
  switch (label) {
    case Label::kBenign:
      return "benign";
    case Label::kCryptoMining:
      return "cryptomining";
    case Label::kExfiltration:
      return "exfiltration";
    case Label::kReverseShell:
      return "reverseshell";
  }
  return "unknown";
}

absl::StatusOr<Label> ParseAttackKind(absl::string_view name) {
  if (name == "cryptomining") return Label::kCryptoMining;
  if (name == "exfiltration") return Label::kExfiltration;
  if (name == "reverseshell") return Label::kReverseShell;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attack kind '", name,
                   "' (expected cryptomining, exfiltration or reverseshell)"));
}

absl::Status ValidateProfile(const WorkloadProfile& profile) {
  if (!(profile.syscall_rate_hz > 0.0) || !std::isfinite(profile.syscall_rate_hz)) {
    return absl::InvalidArgumentError(
        absl::StrCat("profile '", profile.name, "': rate must be positive"));
  }
  if (profile.syscall_distribution.size() != kVocabSize) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile '", profile.name, "': distribution has ",
        profile.syscall_distribution.size(), " entries, expected ", kVocabSize));
  }
  double total = 0.0;
  for (double p : profile.syscall_distribution) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "profile '", profile.name, "': negative or non-finite probability"));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile '", profile.name, "': distribution sums to ", total));
  }
  if (!(profile.net_event_fraction >= 0.0 && profile.net_event_fraction <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile '", profile.name, "': net_event_fraction outside [0, 1]"));
  }
  if (!(profile.burstiness >= 0.0) || !std::isfinite(profile.burstiness)) {
    return absl::InvalidArgumentError(
        absl::StrCat("profile '", profile.name, "': negative burstiness"));
  }
  double proto_total = 0.0;
  for (double w : profile.net_proto_weights) {
    if (!(w >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("profile '", profile.name, "': negative protocol weight"));
    }
    proto_total += w;
  }
  if (profile.net_event_fraction > 0.0 && proto_total <= 0.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "profile '", profile.name, "': network events without protocol weights"));
  }
  return absl::OkStatus();
}

WorkloadProfile NginxLikeProfile() {
  WorkloadProfile p;
  p.name = "nginx-like";
  p.syscall_rate_hz = 1000.0;
  p.syscall_distribution = BuildDistribution({
      {0, 0.14},   // read
      {1, 0.06},   // write
      {3, 0.06},   // close
      {5, 0.04},   // fstat
      {19, 0.08},  // writev
      {29, 0.06},  // sendfile
      {30, 0.07},  // accept4
      {32, 0.06},  // recvfrom
      {39, 0.03},  // setsockopt
      {50, 0.16},  // epoll_wait
      {51, 0.08},  // epoll_ctl
      {59, 0.05},  // openat
      {60, 0.03},  // newfstatat
      {53, 0.02},  // clock_gettime
      {54, 0.02},  // gettimeofday
      {52, 0.01},  // futex
      {9, 0.01},   // mmap
      {11, 0.01},  // munmap
      {49, 0.01},  // fcntl
  });
  p.net_event_fraction = 0.25;
  p.burstiness = 0.6;
  p.net_proto_weights = {0.05, 0.85, 0.10};
  return p;
}

WorkloadProfile RedisLikeProfile() {
  WorkloadProfile p;
  p.name = "redis-like";
  p.syscall_rate_hz = 1000.0;
  p.syscall_distribution = BuildDistribution({
      {0, 0.18},   // read
      {1, 0.14},   // write
      {50, 0.14},  // epoll_wait
      {52, 0.14},  // futex
      {53, 0.08},  // clock_gettime
      {54, 0.05},  // gettimeofday
      {9, 0.03},   // mmap
      {26, 0.03},  // madvise
      {12, 0.03},  // brk
      {32, 0.04},  // recvfrom
      {31, 0.04},  // sendto
      {51, 0.03},  // epoll_ctl
      {3, 0.02},   // close
      {30, 0.02},  // accept4
      {17, 0.02},  // pwrite64
      {25, 0.01},  // msync
  });
  p.net_event_fraction = 0.15;
  p.burstiness = 0.3;
  p.net_proto_weights = {0.02, 0.0, 0.98};
  return p;
}

absl::StatusOr<WorkloadProfile> BuiltinProfile(absl::string_view name) {
  if (name == "nginx" || name == "nginx-like") return NginxLikeProfile();
  if (name == "redis" || name == "redis-like") return RedisLikeProfile();
  return absl::InvalidArgumentError(
      absl::StrCat("unknown workload profile '", name, "'"));
}

int64_t InjectedEventCount(const AttackScenario& scenario) {
  const double seconds = static_cast<double>(scenario.duration_us) * 1e-6;
  auto units = [&](double rate_hz) {
    return std::max<int64_t>(
        1, static_cast<int64_t>(std::llround(scenario.intensity * rate_hz * seconds)));
  };
  switch (scenario.kind) {
    case Label::kCryptoMining:
      return units(kMiningRateHz);
    case Label::kExfiltration:
      return 2 * units(kExfilRateHz);
    case Label::kReverseShell:
      return static_cast<int64_t>(kReverseShellMotif.size()) *
             units(kReverseShellRateHz);
    case Label::kBenign:
      break;
  }
  return 0;
}

absl::StatusOr<std::vector<TelemetryEvent>> GenerateBaseline(
    const WorkloadProfile& profile, int64_t duration_us, uint64_t seed,
    int32_t cluster_id) {
  if (duration_us <= 0) {
    return absl::InvalidArgumentError("duration_us must be positive");
  }
  if (absl::Status s = ValidateProfile(profile); !s.ok()) return s;

  RandomStream rng(seed);
  std::vector<TelemetryEvent> events;
  events.reserve(static_cast<size_t>(
      profile.syscall_rate_hz * static_cast<double>(duration_us) * 1e-6 * 1.1) + 16);
  const double rate_per_us = profile.syscall_rate_hz * 1e-6;
  const double b = profile.burstiness;
  double t = 0.0;
  while (true) {
    double gap = rng.Exponential(rate_per_us);
    if (b > 0.0) gap *= std::exp(b * rng.Gaussian() - 0.5 * b * b);
    t += gap;
    const auto ts = static_cast<int64_t>(t);
    if (ts >= duration_us) break;
    TelemetryEvent e;
    e.timestamp_us = ts;
    e.cluster_id = cluster_id;
    if (rng.Uniform() < profile.net_event_fraction) {
      e.kind = EventKind::kNetwork;
      e.net_proto = static_cast<NetProto>(rng.Categorical(profile.net_proto_weights));
      e.bytes_out = BenignBytes(e.net_proto, rng);
    } else {
      e.kind = EventKind::kSyscall;
      e.syscall_id = static_cast<int32_t>(rng.Categorical(profile.syscall_distribution));
    }
    events.push_back(e);
  }
  return events;
}

absl::StatusOr<std::vector<TelemetryEvent>> InjectAttack(
    std::span<const TelemetryEvent> stream, const AttackScenario& scenario,
    uint64_t seed) {
  if (scenario.kind == Label::kBenign) {
    return absl::InvalidArgumentError("attack scenario kind must not be benign");
  }
  if (!(scenario.intensity > 0.0 && scenario.intensity <= 1.0)) {
    return absl::InvalidArgumentError("attack intensity must lie in (0, 1]");
  }
  if (scenario.duration_us <= 0) {
    return absl::InvalidArgumentError("attack duration must be positive");
  }
  if (stream.empty()) {
    return absl::InvalidArgumentError("cannot inject into an empty stream");
  }
  const int64_t span_begin = stream.front().timestamp_us;
  const int64_t span_end = stream.back().timestamp_us + 1;
  const int64_t start = scenario.start_us;
  const int64_t end = scenario.start_us + scenario.duration_us;
  if (start < span_begin || end > span_end) {
    return absl::OutOfRangeError(absl::StrCat(
        "attack interval [", start, ", ", end, ") outside stream span [",
        span_begin, ", ", span_end, ")"));
  }

  RandomStream rng(seed);
  const int32_t cluster_id = stream.front().cluster_id;
  const int64_t total = InjectedEventCount(scenario);
  const auto duration = static_cast<double>(scenario.duration_us);
  auto clamp_ts = [&](double t) {
    return std::clamp<int64_t>(static_cast<int64_t>(t), start, end - 1);
  };

  std::vector<TelemetryEvent> injected;
  injected.reserve(static_cast<size_t>(total));
  TelemetryEvent proto_event;
  proto_event.cluster_id = cluster_id;
  proto_event.label = scenario.kind;

  switch (scenario.kind) {
    case Label::kCryptoMining: {
      // Bursts of up to 32 back-to-back compute syscalls, 1-3 us apart.
      constexpr int64_t kBurst = 32;
      static constexpr std::array<double, 4> kWeights = {0.4, 0.2, 0.3, 0.1};
      for (int64_t done = 0; done < total;) {
        const int64_t n = std::min(kBurst, total - done);
        double t = static_cast<double>(start) + rng.Uniform() * duration;
        for (int64_t i = 0; i < n; ++i) {
          TelemetryEvent e = proto_event;
          e.kind = EventKind::kSyscall;
          e.syscall_id = kMiningSyscalls[rng.Categorical(kWeights)];
          e.timestamp_us = clamp_ts(t);
          injected.push_back(e);
          t += 1.0 + 2.0 * rng.Uniform();
        }
        done += n;
      }
      break;
    }
    case Label::kExfiltration: {
      // Each beacon is a sendto/write syscall followed by the outbound
      // packet: DNS tunnelling queries or large HTTP POST bodies.
      for (int64_t i = 0; i < total / 2; ++i) {
        const int64_t ts = clamp_ts(static_cast<double>(start) + rng.Uniform() * duration);
        const bool dns = rng.Uniform() < 0.5;
        TelemetryEvent sc = proto_event;
        sc.kind = EventKind::kSyscall;
        sc.syscall_id = dns ? 31 : 1;  // sendto : write
        sc.timestamp_us = ts;
        TelemetryEvent net = proto_event;
        net.kind = EventKind::kNetwork;
        net.net_proto = dns ? NetProto::kDns : NetProto::kHttp;
        net.bytes_out = dns ? 180 + static_cast<int64_t>(rng.UniformInt(76))
                            : 4096 + static_cast<int64_t>(rng.UniformInt(61440));
        net.timestamp_us = ts;
        injected.push_back(sc);
        injected.push_back(net);
      }
      break;
    }
    case Label::kReverseShell: {
      // Motifs placed in evenly spaced slots with jitter inside the slot's
      // first half so consecutive motifs never interleave.
      const int64_t reps = total / static_cast<int64_t>(kReverseShellMotif.size());
      const double slot = duration / static_cast<double>(reps);
      for (int64_t r = 0; r < reps; ++r) {
        double t = static_cast<double>(start) +
                   (static_cast<double>(r) + 0.5 * rng.Uniform()) * slot;
        for (int id : kReverseShellMotif) {
          TelemetryEvent e = proto_event;
          e.kind = EventKind::kSyscall;
          e.syscall_id = id;
          e.timestamp_us = clamp_ts(t);
          injected.push_back(e);
          t += std::min(1.0, 0.1 * slot);
        }
      }
      break;
    }
    case Label::kBenign:
      break;
  }
  std::stable_sort(injected.begin(), injected.end(),
                   [](const TelemetryEvent& a, const TelemetryEvent& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  return MergeStreams(stream, injected);
}

std::vector<TelemetryEvent> MergeStreams(std::span<const TelemetryEvent> first,
                                         std::span<const TelemetryEvent> second) {
  std::vector<TelemetryEvent> merged;
  merged.reserve(first.size() + second.size());
  std::merge(first.begin(), first.end(), second.begin(), second.end(),
             std::back_inserter(merged),
             [](const TelemetryEvent& a, const TelemetryEvent& b) {
               return a.timestamp_us < b.timestamp_us;
             });
  return merged;
}

void WriteEventStream(std::span<const TelemetryEvent> stream, std::ostream& out) {
  out << kEventCsvHeader << '\n';
  for (const TelemetryEvent& e : stream) {
    out << e.timestamp_us << ',' << e.cluster_id << ','
        << static_cast<int>(e.kind) << ',' << e.syscall_id << ','
        << static_cast<int>(e.net_proto) << ',' << e.bytes_out << ','
        << static_cast<int>(e.label) << '\n';
  }
}

absl::StatusOr<std::vector<TelemetryEvent>> ReadEventStream(std::istream& in) {
  std::vector<TelemetryEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line == kEventCsvHeader)) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    int64_t v[7];
    bool ok = fields.size() == 7;
    for (size_t i = 0; ok && i < 7; ++i) ok = absl::SimpleAtoi(fields[i], &v[i]);
    if (!ok || v[2] < 0 || v[2] > 1 || v[4] < 0 || v[4] > 2 || v[6] < 0 ||
        v[6] >= kNumLabels) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed event record on line ", line_no));
    }
    TelemetryEvent e;
    e.timestamp_us = v[0];
    e.cluster_id = static_cast<int32_t>(v[1]);
    e.kind = static_cast<EventKind>(v[2]);
    e.syscall_id = static_cast<int32_t>(v[3]);
    e.net_proto = static_cast<NetProto>(v[4]);
    e.bytes_out = v[5];
    e.label = static_cast<Label>(v[6]);
    events.push_back(e);
  }
  return events;
}

}  // namespace fedmon
