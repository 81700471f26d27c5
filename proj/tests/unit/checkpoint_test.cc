// Copyright 2026 The pamdenoise Authors. All Rights Reserved.
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

#include "pamd/checkpoint.h"

#include <fstream>

#include "gtest/gtest.h"
#include "pamd/errors.h"
#include "test_util.h"

namespace pamd {
namespace {

Checkpoint sample_checkpoint() {
  Checkpoint ck;
  ck.config.topology = {6, 8, 6};
  ck.config.learning_rate = 2.5e-4;
  ck.config.epochs = 12;
  ck.config.batch_size = 64;
  ck.config.use_perceptual_weights = true;
  ck.config.seed = 99;
  ck.config.context_frames = 1;
  ck.config.dropout = default_dropout(ck.config.topology, 1, 7);
  ck.params = init_params(ck.config.topology, 99);
  ck.params.layers[1].bias[2] = -0.123456789012345;
  return ck;
}

TEST(Checkpoint, RoundTripIsExact) {
  const Checkpoint ck = sample_checkpoint();
  const Checkpoint back = parse_checkpoint(serialize_checkpoint(ck));
  EXPECT_EQ(back.params.topology, ck.params.topology);
  for (std::size_t i = 0; i < ck.params.layers.size(); ++i) {
    EXPECT_EQ(back.params.layers[i].weight, ck.params.layers[i].weight);
    EXPECT_EQ(back.params.layers[i].bias, ck.params.layers[i].bias);
  }
  EXPECT_EQ(back.config.learning_rate, 2.5e-4);
  EXPECT_EQ(back.config.epochs, 12);
  EXPECT_EQ(back.config.batch_size, 64);
  EXPECT_TRUE(back.config.use_perceptual_weights);
  EXPECT_EQ(back.config.seed, 99u);
  EXPECT_EQ(back.config.dropout.keep_prob, ck.config.dropout.keep_prob);
  EXPECT_EQ(back.config.dropout.rng_seed, 7u);
}

TEST(Checkpoint, SerializationIsDeterministic) {
  EXPECT_EQ(serialize_checkpoint(sample_checkpoint()), serialize_checkpoint(sample_checkpoint()));
}

TEST(Checkpoint, LayoutStartsWithMagicAndVersion) {
  const std::string bytes = serialize_checkpoint(sample_checkpoint());
  EXPECT_EQ(bytes.substr(0, 8), "PAMDCKPT");
  EXPECT_EQ(bytes[8], 1);
  // Payload is (8*6 + 8) + (6*8 + 6) float64 values after the header.
  std::uint64_t header_len = 0;
  for (int i = 0; i < 8; ++i) {
    header_len |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[12 + i])) << (8 * i);
  }
  EXPECT_EQ(bytes.size(), 20 + header_len + (56 + 54) * 8);
}

TEST(Checkpoint, FileRoundTrip) {
  testing::TempDir dir("ckpt");
  const Checkpoint ck = sample_checkpoint();
  save_checkpoint(dir.file("a.ckpt"), ck);
  const Checkpoint back = load_checkpoint(dir.file("a.ckpt"));
  EXPECT_EQ(back.params.layers[0].weight, ck.params.layers[0].weight);
  EXPECT_THROW(load_checkpoint(dir.file("missing.ckpt")), DataError);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  const std::string bytes = serialize_checkpoint(sample_checkpoint());
  EXPECT_THROW(parse_checkpoint("garbage"), DataError);
  EXPECT_THROW(parse_checkpoint(bytes.substr(0, bytes.size() - 8)), DataError);
  EXPECT_THROW(parse_checkpoint(bytes + std::string(8, '\0')), DataError);
  std::string bad_version = bytes;
  bad_version[8] = 2;
  EXPECT_THROW(parse_checkpoint(bad_version), DataError);
  std::string bad_header = bytes;
  bad_header[20] = '!';
  EXPECT_THROW(parse_checkpoint(bad_header), DataError);
}

TEST(Checkpoint, RejectsTopologyMismatchOnSave) {
  Checkpoint ck = sample_checkpoint();
  ck.config.topology = {6, 9, 6};
  EXPECT_THROW(serialize_checkpoint(ck), std::invalid_argument);
}

}  // namespace
}  // namespace pamd
