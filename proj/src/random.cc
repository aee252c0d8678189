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

#include "fedmon/random.h"

#include <cmath>
#include <numbers>

namespace fedmon {

uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

uint64_t HashLabel(absl::string_view label) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t DeriveSeed(uint64_t master, absl::string_view label, uint64_t index) {
  return Mix64(Mix64(master ^ HashLabel(label)) + (index + 1) * kGolden);
}

uint64_t RandomStream::NextU64() {
  ++counter_;
  return Mix64(seed_ + counter_ * kGolden);
}

double RandomStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RandomStream::Gaussian() {
  if (spare_gaussian_.has_value()) {
    const double v = *spare_gaussian_;
    spare_gaussian_.reset();
    return v;
  }
  const double u1 = 1.0 - Uniform();  // (0, 1]
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double RandomStream::Exponential(double rate) {
  return -std::log1p(-Uniform()) / rate;
}

uint64_t RandomStream::UniformInt(uint64_t n) {
  if (n <= 1) return 0;
  const unsigned __int128 product =
      static_cast<unsigned __int128>(NextU64()) * n;
  return static_cast<uint64_t>(product >> 64);
}

size_t RandomStream::Categorical(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double target = Uniform() * total;
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (target < cumulative) return i;
  }
  // Rounding can leave target == total; fall back to the last category that
  // has mass.
  return last_positive;
}

}  // namespace fedmon
