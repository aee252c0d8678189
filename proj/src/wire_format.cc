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

#include "fedmon/wire_format.h"

#include <bit>
#include <cstring>

#include "absl/strings/str_cat.h"

namespace fedmon {
namespace {

constexpr uint32_t Magic(const char (&tag)[5]) {
  return static_cast<uint32_t>(static_cast<unsigned char>(tag[0])) |
         static_cast<uint32_t>(static_cast<unsigned char>(tag[1])) << 8 |
         static_cast<uint32_t>(static_cast<unsigned char>(tag[2])) << 16 |
         static_cast<uint32_t>(static_cast<unsigned char>(tag[3])) << 24;
}

constexpr uint32_t kCheckpointMagic = Magic("FMCK");
constexpr uint32_t kUpdateMagic = Magic("FMUP");
constexpr uint32_t kFeatureMagic = Magic("FMFV");

class Writer {
 public:
  explicit Writer(size_t reserve) { out_.reserve(reserve); }
  void U32(uint32_t v) { Bytes(v, 4); }
  void U64(uint64_t v) { Bytes(v, 8); }
  void F64(double v) { Bytes(std::bit_cast<uint64_t>(v), 8); }
  std::string Take() { return std::move(out_); }

 private:
  void Bytes(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(absl::string_view in) : in_(in) {}
  uint32_t U32() { return static_cast<uint32_t>(Bytes(4)); }
  uint64_t U64() { return Bytes(8); }
  double F64() { return std::bit_cast<double>(Bytes(8)); }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  uint64_t Bytes(int n) {
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  absl::string_view in_;
  size_t pos_ = 0;
};

absl::Status CheckFraming(absl::string_view bytes, uint32_t magic,
                          absl::string_view what) {
  if (static_cast<int64_t>(bytes.size()) < kHeaderBytes) {
    return absl::DataLossError(absl::StrCat(what, ": truncated header"));
  }
  Reader r(bytes);
  if (r.U32() != magic) {
    return absl::DataLossError(absl::StrCat(what, ": bad magic"));
  }
  if (const uint32_t v = r.U32(); v != kFormatVersion) {
    return absl::DataLossError(absl::StrCat(what, ": unsupported version ", v));
  }
  return absl::OkStatus();
}

absl::Status CheckPayload(absl::string_view bytes, uint64_t count,
                          absl::string_view what) {
  const uint64_t expected = static_cast<uint64_t>(kHeaderBytes) + count * 8;
  if (bytes.size() != expected) {
    return absl::DataLossError(absl::StrCat(what, ": length ", bytes.size(),
                                            ", header implies ", expected));
  }
  return absl::OkStatus();
}

}  // namespace

int64_t CheckpointSizeBytes(const VaeShape& shape) {
  return kHeaderBytes + shape.ParamCount() * 8;
}

int64_t FeatureRecordSizeBytes(int feature_dim) {
  return kHeaderBytes + static_cast<int64_t>(feature_dim) * 8;
}

std::string EncodeCheckpoint(const VaeParams& params) {
  const VaeShape& s = params.shape();
  Writer w(static_cast<size_t>(CheckpointSizeBytes(s)));
  w.U32(kCheckpointMagic);
  w.U32(kFormatVersion);
  w.U32(static_cast<uint32_t>(s.input_dim));
  w.U32(static_cast<uint32_t>(s.hidden_dim));
  w.U32(static_cast<uint32_t>(s.latent_dim));
  w.U32(0);
  w.U64(static_cast<uint64_t>(params.flat().size()));
  for (double v : params.flat()) w.F64(v);
  return w.Take();
}

absl::StatusOr<VaeParams> DecodeCheckpoint(absl::string_view bytes) {
  if (absl::Status s = CheckFraming(bytes, kCheckpointMagic, "checkpoint"); !s.ok()) {
    return s;
  }
  Reader r(bytes);
  r.U64();
  VaeShape shape;
  shape.input_dim = static_cast<int>(r.U32());
  shape.hidden_dim = static_cast<int>(r.U32());
  shape.latent_dim = static_cast<int>(r.U32());
  r.U32();
  const uint64_t p = r.U64();
  if (absl::Status s = CheckPayload(bytes, p, "checkpoint"); !s.ok()) return s;
  std::vector<double> flat(p);
  for (double& v : flat) v = r.F64();
  return VaeParams::FromFlat(shape, std::move(flat));
}

std::string EncodeUpdate(const ModelUpdate& update) {
  Writer w(static_cast<size_t>(update.byte_size()));
  w.U32(kUpdateMagic);
  w.U32(kFormatVersion);
  w.U64(static_cast<uint64_t>(update.delta.size()));
  w.U32(static_cast<uint32_t>(update.round_index));
  w.U32(static_cast<uint32_t>(update.cluster_id));
  w.U64(static_cast<uint64_t>(update.n_samples));
  for (double v : update.delta) w.F64(v);
  return w.Take();
}

absl::StatusOr<ModelUpdate> DecodeUpdate(absl::string_view bytes) {
  if (absl::Status s = CheckFraming(bytes, kUpdateMagic, "update"); !s.ok()) return s;
  Reader r(bytes);
  r.U64();
  const uint64_t p = r.U64();
  ModelUpdate u;
  u.round_index = static_cast<int32_t>(r.U32());
  u.cluster_id = static_cast<int32_t>(r.U32());
  u.n_samples = static_cast<int64_t>(r.U64());
  if (absl::Status s = CheckPayload(bytes, p, "update"); !s.ok()) return s;
  u.delta.resize(p);
  for (double& v : u.delta) v = r.F64();
  return u;
}

std::string EncodeFeatureRecord(const FeatureVector& fv, uint64_t window_index) {
  Writer w(static_cast<size_t>(FeatureRecordSizeBytes(static_cast<int>(fv.values.size()))));
  w.U32(kFeatureMagic);
  w.U32(kFormatVersion);
  w.U32(static_cast<uint32_t>(fv.values.size()));
  w.U32(static_cast<uint32_t>(fv.cluster_id));
  w.U64(window_index);
  w.U32(static_cast<uint32_t>(fv.window_label));
  w.U32(0);
  for (double v : fv.values) w.F64(v);
  return w.Take();
}

absl::StatusOr<FeatureVector> DecodeFeatureRecord(absl::string_view bytes,
                                                  uint64_t* window_index) {
  if (absl::Status s = CheckFraming(bytes, kFeatureMagic, "feature record"); !s.ok()) {
    return s;
  }
  Reader r(bytes);
  r.U64();
  const uint32_t dim = r.U32();
  FeatureVector fv;
  fv.cluster_id = static_cast<int32_t>(r.U32());
  const uint64_t index = r.U64();
  const uint32_t label = r.U32();
  r.U32();
  if (label >= static_cast<uint32_t>(kNumLabels)) {
    return absl::DataLossError("feature record: bad label code");
  }
  fv.window_label = static_cast<Label>(label);
  if (absl::Status s = CheckPayload(bytes, dim, "feature record"); !s.ok()) return s;
  fv.values.resize(dim);
  for (double& v : fv.values) v = r.F64();
  if (window_index != nullptr) *window_index = index;
  return fv;
}

}  // namespace fedmon
