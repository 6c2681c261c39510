// Copyright 2026 The SICM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sicm/checkpoint.hpp"

#include <gtest/gtest.h>

#include "sicm/error.hpp"
#include "test_util.hpp"

namespace sicm {
namespace {

bool same_weights(const std::vector<const Parameter*>& a,
                  const std::vector<const Parameter*>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->name != b[i]->name || a[i]->dims != b[i]->dims ||
        a[i]->value != b[i]->value) {
      return false;
    }
  }
  return true;
}

TEST(Checkpoint, BaseRoundTripsBitExactly) {
  BaseModel model(testing::tiny_config());
  model.initialize();
  const auto bytes = serialize_model(model);
  const BaseModel back = deserialize_base(bytes);
  EXPECT_EQ(back.config, model.config);
  EXPECT_TRUE(same_weights(back.parameters(),
                           std::as_const(model).parameters()));
  EXPECT_EQ(serialize_model(back), bytes);
  EXPECT_EQ(model_hash(back), model_hash(model));
}

TEST(Checkpoint, EnhancementRoundTripsWithBaseHash) {
  ModelConfig c = testing::tiny_config();
  c.enh_group_count = 1;
  EnhancementModel model(c);
  model.initialize();
  model.base_hash = 0xFEEDFACECAFEBEEFULL;
  const auto dir = testing::scratch_dir("ckpt_enh");
  save_checkpoint(model, dir / "e.ckpt");
  const EnhancementModel back = load_enhancement_checkpoint(dir / "e.ckpt");
  EXPECT_EQ(back.base_hash, model.base_hash);
  EXPECT_EQ(back.config, model.config);
  EXPECT_EQ(serialize_model(back), serialize_model(model));
}

TEST(Checkpoint, HashDependsOnWeightsAndConfig) {
  BaseModel a(testing::tiny_config());
  a.initialize();
  BaseModel b = a;
  EXPECT_EQ(model_hash(a), model_hash(b));
  b.parameters()[3]->value[0] += 1e-12;
  EXPECT_NE(model_hash(a), model_hash(b));
  BaseModel c = a;
  c.config.lambda = 0.05;
  EXPECT_NE(model_hash(a), model_hash(c));
}

TEST(Checkpoint, KindsAreNotInterchangeable) {
  BaseModel model(testing::tiny_config());
  model.initialize();
  EXPECT_THROW(deserialize_enhancement(serialize_model(model)), FormatError);
}

TEST(Checkpoint, CorruptionIsRejected) {
  BaseModel model(testing::tiny_config());
  model.initialize();
  auto bytes = serialize_model(model);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_base(bad_magic), FormatError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 8);
  EXPECT_THROW(deserialize_base(truncated), FormatError);
  bytes.push_back(0);
  EXPECT_THROW(deserialize_base(bytes), FormatError);
  EXPECT_THROW(load_base_checkpoint("/nonexistent/x.ckpt"), IoError);
}

TEST(Checkpoint, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64({}), 0xcbf29ce484222325ULL);
  const std::string a = "a";
  EXPECT_EQ(fnv1a64({reinterpret_cast<const std::uint8_t*>(a.data()), 1}),
            0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace sicm
