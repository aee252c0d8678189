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

#ifndef FEDMON_RANDOM_H_
#define FEDMON_RANDOM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/string_view.h"

namespace fedmon {

// Seed derivation and portable pseudo-random streams.
//
// Every random quantity in a simulation is drawn from a RandomStream whose
// seed was derived from the experiment's master seed along a labelled path,
// e.g. DeriveSeed(DeriveSeed(master, "cluster", 2), "train", 0). Derived
// seeds are stable across platforms and compilers: only 64-bit integer
// arithmetic is involved.
//
// Constants (all documented here so independent implementations can
// reproduce the streams bit-for-bit):
//
//   Mix64(x)       splitmix64 finalizer:
//                    x ^= x >> 30; x *= 0xBF58476D1CE4E5B9;
//                    x ^= x >> 27; x *= 0x94D049BB133111EB;
//                    x ^= x >> 31
//   HashLabel(s)   64-bit FNV-1a (offset 0xCBF29CE484222325,
//                  prime 0x100000001B3) over the label's bytes.
//   DeriveSeed(m, s, i) =
//                  Mix64(Mix64(m ^ HashLabel(s)) + (i + 1) * kGolden)
//                  with kGolden = 0x9E3779B97F4A7C15.
//
// RandomStream is counter based: the n-th raw output (n = 0, 1, ...) is
// Mix64(seed + (n + 1) * kGolden), i.e. splitmix64. Two streams with the
// same seed yield the same values regardless of what other streams exist.

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t Mix64(uint64_t x);
uint64_t HashLabel(absl::string_view label);
uint64_t DeriveSeed(uint64_t master, absl::string_view label, uint64_t index);

// A derivation path rooted at a master seed. Immutable value type; Child()
// returns a new node.
class SeedTree {
 public:
  explicit SeedTree(uint64_t master) : seed_(master) {}

  SeedTree Child(absl::string_view label, uint64_t index = 0) const {
    SeedTree child(DeriveSeed(seed_, label, index));
    child.path_ = path_;
    child.path_.emplace_back(std::string(label), index);
    return child;
  }

  uint64_t seed() const { return seed_; }
  const std::vector<std::pair<std::string, uint64_t>>& path() const {
    return path_;
  }

 private:
  uint64_t seed_;
  std::vector<std::pair<std::string, uint64_t>> path_;
};

class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : seed_(seed) {}

  uint64_t NextU64();

  // Uniform in [0, 1) with 53 bits of resolution: (NextU64() >> 11) * 2^-53.
  double Uniform();

  // Standard normal via Box-Muller on two uniforms (u1 mapped to (0, 1]).
  // Each pair of uniforms produces two normals; the second is cached and
  // returned by the next call.
  double Gaussian();

  // Exponential with the given rate: -log(1 - U) / rate.
  double Exponential(double rate);

  // Uniform integer in [0, n) by rejection-free multiply-shift on the
  // 64-bit output (bias below 2^-32 for n < 2^32).
  uint64_t UniformInt(uint64_t n);

  // Inverse-CDF categorical draw. Probabilities need not be normalized but
  // must be non-negative with a positive sum. Zero-probability categories
  // are never returned.
  size_t Categorical(std::span<const double> probs);

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
  std::optional<double> spare_gaussian_;
};

}  // namespace fedmon

#endif  // FEDMON_RANDOM_H_
