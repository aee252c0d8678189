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

#ifndef FEDMON_WIRE_FORMAT_H_
#define FEDMON_WIRE_FORMAT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/features.h"
#include "fedmon/vae.h"

namespace fedmon {

// Binary layouts. Every message starts with a 32-byte header followed by a
// payload of little-endian IEEE-754 binary64 values. All integers are
// little-endian.
//
// Checkpoint (global model broadcast):
//   off  0  u32  magic "FMCK"
//   off  4  u32  format version (1)
//   off  8  u32  D (input dim)
//   off 12  u32  H (hidden dim)
//   off 16  u32  L (latent dim)
//   off 20  u32  reserved, 0
//   off 24  u64  P (parameter count)
//   off 32  f64[P] flat parameters in VaeLayout order
//
// Update (client -> server):
//   off  0  u32  magic "FMUP"
//   off  4  u32  format version (1)
//   off  8  u64  P
//   off 16  u32  round index
//   off 20  u32  cluster id
//   off 24  u64  n_samples
//   off 32  f64[P] delta
//
// Feature record (centralized streaming, one per window):
//   off  0  u32  magic "FMFV"
//   off  4  u32  format version (1)
//   off  8  u32  D
//   off 12  u32  cluster id
//   off 16  u64  window index
//   off 24  u32  label code
//   off 28  u32  reserved, 0
//   off 32  f64[D] raw feature values

inline constexpr int64_t kHeaderBytes = 32;
inline constexpr uint32_t kFormatVersion = 1;

struct ModelUpdate {
  std::vector<double> delta;  // params_after - params_before
  int64_t n_samples = 1;
  int32_t cluster_id = 0;
  int32_t round_index = 0;

  // Serialized length: P * 8 + 32.
  int64_t byte_size() const {
    return static_cast<int64_t>(delta.size()) * 8 + kHeaderBytes;
  }
  bool operator==(const ModelUpdate&) const = default;
};

int64_t CheckpointSizeBytes(const VaeShape& shape);
int64_t FeatureRecordSizeBytes(int feature_dim);

std::string EncodeCheckpoint(const VaeParams& params);
absl::StatusOr<VaeParams> DecodeCheckpoint(absl::string_view bytes);

std::string EncodeUpdate(const ModelUpdate& update);
absl::StatusOr<ModelUpdate> DecodeUpdate(absl::string_view bytes);

std::string EncodeFeatureRecord(const FeatureVector& fv, uint64_t window_index);
absl::StatusOr<FeatureVector> DecodeFeatureRecord(absl::string_view bytes,
                                                  uint64_t* window_index = nullptr);

}  // namespace fedmon

#endif  // FEDMON_WIRE_FORMAT_H_
