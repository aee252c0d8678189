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

#ifndef FEDMON_TELEMETRY_H_
#define FEDMON_TELEMETRY_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fedmon {

// Size of the syscall vocabulary. Ids are documented in kSyscallNames.
inline constexpr int kVocabSize = 64;

// Reverse-shell motif: socket, connect, dup2, execve.
inline constexpr std::array<int, 4> kReverseShellMotif = {40, 41, 42, 43};

// Syscalls emitted by the crypto-mining injector (sched_yield, mmap,
// clock_gettime, getrusage).
inline constexpr std::array<int, 4> kMiningSyscalls = {23, 9, 53, 55};

extern const std::array<absl::string_view, kVocabSize> kSyscallNames;

enum class EventKind : uint8_t { kSyscall = 0, kNetwork = 1 };
enum class NetProto : uint8_t { kDns = 0, kHttp = 1, kTcpOther = 2 };

enum class Label : uint8_t {
  kBenign = 0,
  kCryptoMining = 1,
  kExfiltration = 2,
  kReverseShell = 3,
};
inline constexpr int kNumLabels = 4;

absl::string_view LabelName(Label label);
absl::StatusOr<Label> ParseAttackKind(absl::string_view name);

struct TelemetryEvent {
  int64_t timestamp_us = 0;
  int32_t cluster_id = 0;
  EventKind kind = EventKind::kSyscall;
  // Only meaningful for kSyscall; network events carry 0.
  int32_t syscall_id = 0;
  // Only meaningful for kNetwork.
  NetProto net_proto = NetProto::kTcpOther;
  int64_t bytes_out = 0;
  Label label = Label::kBenign;

  bool operator==(const TelemetryEvent&) const = default;
};

struct WorkloadProfile {
  std::string name;
  double syscall_rate_hz = 0.0;
  // Probability vector over the vocabulary; must sum to 1 within 1e-9.
  std::vector<double> syscall_distribution;
  double net_event_fraction = 0.0;
  // Log-normal jitter (sigma) applied to exponential inter-arrival gaps.
  double burstiness = 0.0;
  // Relative frequency of DNS, HTTP, other-TCP among network events.
  std::array<double, 3> net_proto_weights = {0.1, 0.6, 0.3};
};

absl::Status ValidateProfile(const WorkloadProfile& profile);

// Built-in profiles. "nginx-like" is read/write/epoll heavy with HTTP
// egress; "redis-like" is read/write/futex heavy with plain TCP replies.
WorkloadProfile NginxLikeProfile();
WorkloadProfile RedisLikeProfile();
absl::StatusOr<WorkloadProfile> BuiltinProfile(absl::string_view name);

struct AttackScenario {
  Label kind = Label::kCryptoMining;
  int64_t start_us = 0;
  int64_t duration_us = 1;
  double intensity = 1.0;  // in (0, 1]
};

// Injection rates at intensity 1.0. The number of injected events is a
// deterministic function of the scenario (see InjectedEventCount); only
// their placement is random.
inline constexpr double kMiningRateHz = 6000.0;
inline constexpr double kExfilRateHz = 1500.0;      // beacons, 2 events each
inline constexpr double kReverseShellRateHz = 900.0;  // motifs, 4 events each

int64_t InjectedEventCount(const AttackScenario& scenario);

// Benign event stream over [0, duration_us). Inter-arrival gaps are
// Exp(rate) scaled by a mean-one log-normal factor exp(b*g - b^2/2) where b
// is the profile's burstiness. Each event is a network event with
// probability net_event_fraction, otherwise a syscall drawn from the
// profile distribution.
absl::StatusOr<std::vector<TelemetryEvent>> GenerateBaseline(
    const WorkloadProfile& profile, int64_t duration_us, uint64_t seed,
    int32_t cluster_id = 0);

// Adds labelled attack events inside [start_us, start_us + duration_us) and
// merges them into the stream. On equal timestamps original events precede
// injected ones.
absl::StatusOr<std::vector<TelemetryEvent>> InjectAttack(
    std::span<const TelemetryEvent> stream, const AttackScenario& scenario,
    uint64_t seed);

// Stable timestamp merge; ties keep `first` before `second`.
std::vector<TelemetryEvent> MergeStreams(
    std::span<const TelemetryEvent> first,
    std::span<const TelemetryEvent> second);

// Event dump: a header row, then one line per event of comma separated
// decimal integers (enums as their codes). ReadEventStream accepts input with
// or without the header.
inline constexpr char kEventCsvHeader[] =
    "timestamp_us,cluster_id,kind,syscall_id,net_proto,bytes_out,label";

void WriteEventStream(std::span<const TelemetryEvent> stream, std::ostream& out);
absl::StatusOr<std::vector<TelemetryEvent>> ReadEventStream(std::istream& in);

}  // namespace fedmon

#endif  // FEDMON_TELEMETRY_H_
