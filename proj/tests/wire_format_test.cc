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

#include <cstdint>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace fedmon {
namespace {

TEST(WireFormatTest, UpdateSizeIsPayloadPlusHeader) {
  ModelUpdate u;
  u.delta.assign(1000, 0.5);
  EXPECT_EQ(u.byte_size(), 8032);
  EXPECT_EQ(static_cast<int64_t>(EncodeUpdate(u).size()), 8032);
  ModelUpdate v = u;
  v.delta.assign(1000, -3.0);
  v.cluster_id = 2;
  EXPECT_EQ(EncodeUpdate(v).size(), EncodeUpdate(u).size());
}

TEST(WireFormatTest, DefaultModelSizes) {
  const VaeShape shape{101, 32, 8};
  EXPECT_EQ(CheckpointSizeBytes(shape), 7413 * 8 + 32);
  EXPECT_EQ(static_cast<int64_t>(EncodeCheckpoint(VaeParams::Zeros(shape)).size()),
            CheckpointSizeBytes(shape));
  EXPECT_EQ(FeatureRecordSizeBytes(101), 840);
}

TEST(WireFormatTest, UpdateRoundTrip) {
  ModelUpdate u;
  u.delta = {1.5, -0.0, std::numeric_limits<double>::denorm_min(), 1e308, -7.25};
  u.n_samples = 12345;
  u.cluster_id = 7;
  u.round_index = 9;
  const std::string bytes = EncodeUpdate(u);
  EXPECT_EQ(bytes.substr(0, 4), "FMUP");
  ASSERT_OK_AND_ASSIGN(ModelUpdate back, DecodeUpdate(bytes));
  EXPECT_EQ(back, u);
  EXPECT_TRUE(std::signbit(back.delta[1]));
}

TEST(WireFormatTest, CheckpointRoundTripIsBitExact) {
  const VaeParams params = VaeParams::Initialize({9, 5, 3}, 77);
  const std::string bytes = EncodeCheckpoint(params);
  EXPECT_EQ(bytes.substr(0, 4), "FMCK");
  ASSERT_OK_AND_ASSIGN(VaeParams back, DecodeCheckpoint(bytes));
  EXPECT_EQ(back, params);
  EXPECT_EQ(back.shape(), params.shape());
}

TEST(WireFormatTest, FeatureRecordRoundTrip) {
  FeatureVector fv;
  fv.values = {0.25, 3.0, -1.0};
  fv.cluster_id = 4;
  fv.window_label = Label::kReverseShell;
  const std::string bytes = EncodeFeatureRecord(fv, 99);
  EXPECT_EQ(static_cast<int64_t>(bytes.size()), FeatureRecordSizeBytes(3));
  uint64_t index = 0;
  ASSERT_OK_AND_ASSIGN(FeatureVector back, DecodeFeatureRecord(bytes, &index));
  EXPECT_EQ(back, fv);
  EXPECT_EQ(index, 99u);
}

TEST(WireFormatTest, LittleEndianLayout) {
  ModelUpdate u;
  u.delta = {1.0};
  u.n_samples = 0x0102030405060708;
  u.round_index = 3;
  u.cluster_id = 0x0A0B;
  const std::string b = EncodeUpdate(u);
  EXPECT_EQ(static_cast<uint8_t>(b[4]), 1);   // version
  EXPECT_EQ(static_cast<uint8_t>(b[8]), 1);   // P
  EXPECT_EQ(static_cast<uint8_t>(b[16]), 3);  // round
  EXPECT_EQ(static_cast<uint8_t>(b[20]), 0x0B);
  EXPECT_EQ(static_cast<uint8_t>(b[21]), 0x0A);
  EXPECT_EQ(static_cast<uint8_t>(b[24]), 0x08);
  EXPECT_EQ(static_cast<uint8_t>(b[31]), 0x01);
  // 1.0 = 0x3FF0000000000000.
  EXPECT_EQ(static_cast<uint8_t>(b[38]), 0xF0);
  EXPECT_EQ(static_cast<uint8_t>(b[39]), 0x3F);
}

TEST(WireFormatTest, CorruptInputIsRejected) {
  ModelUpdate u;
  u.delta = {1.0, 2.0};
  std::string bytes = EncodeUpdate(u);
  EXPECT_EQ(DecodeUpdate(bytes.substr(0, 20)).status().code(), absl::StatusCode::kDataLoss);
  EXPECT_FALSE(DecodeUpdate(bytes.substr(0, bytes.size() - 1)).ok());
  EXPECT_FALSE(DecodeCheckpoint(bytes).ok());  // wrong magic
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(DecodeUpdate(bad_magic).status().code(), absl::StatusCode::kDataLoss);
  std::string bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_FALSE(DecodeUpdate(bad_version).ok());
}

}  // namespace
}  // namespace fedmon
