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

#include "sicm/fusion.hpp"

#include <gtest/gtest.h>

#include "sicm/error.hpp"
#include "test_util.hpp"

namespace sicm {
namespace {

using testing::random_tensor;

LatentGroups constant_groups(int count, int width, double first) {
  LatentGroups g;
  for (int i = 0; i < count; ++i) g.groups.emplace_back(width, 2, 2, first + i);
  return g;
}

TEST(FuseGroups, AddsTheFirstMGroupsAndPassesTheRest) {
  const LatentGroups base = constant_groups(5, 4, 1.0);  // 1,2,3,4,5
  const LatentGroups enh = constant_groups(2, 4, 10.0);  // 10,11
  const LatentGroups fused = fuse_groups(base, enh);
  ASSERT_EQ(fused.count(), 5);
  EXPECT_EQ(fused.groups[0][0], 11.0);
  EXPECT_EQ(fused.groups[1][0], 13.0);
  for (int k = 2; k < 5; ++k) {
    EXPECT_TRUE(bit_equal(fused.groups[k], base.groups[k]));
  }
}

TEST(FuseGroups, FullEnhancementAddsEveryGroup) {
  const LatentGroups base = split_groups(random_tensor(6, 3, 3, 1), 3);
  const LatentGroups enh = split_groups(random_tensor(6, 3, 3, 2), 3);
  const LatentGroups fused = fuse_groups(base, enh);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < fused.groups[k].size(); ++i)
      EXPECT_EQ(fused.groups[k][i], base.groups[k][i] + enh.groups[k][i]);
}

TEST(FuseGroups, RejectsMoreEnhancementGroupsThanBase) {
  EXPECT_THROW(fuse_groups(constant_groups(2, 4, 0), constant_groups(3, 4, 0)),
               ConfigError);
}

TEST(FuseGroups, RejectsShapeMismatch) {
  LatentGroups enh;
  enh.groups.emplace_back(4, 2, 3);
  EXPECT_THROW(fuse_groups(constant_groups(2, 4, 0), enh), ShapeError);
}

TEST(FuseGroups, BackwardRoutesGradientToEnhancementGroups) {
  const LatentGroups grad = constant_groups(4, 3, 1.0);
  const LatentGroups back = fuse_groups_backward_enh(grad, 3);
  ASSERT_EQ(back.count(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(bit_equal(back.groups[k], grad.groups[k]));
  EXPECT_THROW(fuse_groups_backward_enh(grad, 5), ConfigError);
}

}  // namespace
}  // namespace sicm
