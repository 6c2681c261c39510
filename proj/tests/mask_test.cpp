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

#include "sicm/mask.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "sicm/error.hpp"
#include "sicm/image_io.hpp"
#include "sicm/synthetic.hpp"
#include "test_util.hpp"

namespace sicm {
namespace {

Tensor half_black_half_white(int size) {
  Tensor t(3, size, size, 0.0);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < size; ++y)
      for (int x = size / 2; x < size; ++x) t.at(c, y, x) = 1.0;
  return t;
}

void write_constant_graymap(const std::filesystem::path& path, int h, int w,
                            std::uint8_t value) {
  write_graymap({h, w, std::vector<std::uint8_t>(h * w, value)}, path);
}

TEST(LoadMask, ThresholdsAt128) {
  const auto dir = testing::scratch_dir("load_mask");
  GrayImage gray{1, 4, {0, 127, 128, 255}};
  write_graymap(gray, dir / "a.mask");
  const BinaryMask mask = load_mask(dir / "a.mask", 1, 4);
  EXPECT_EQ(mask.at(0, 0), 0);
  EXPECT_EQ(mask.at(0, 1), 0);
  EXPECT_EQ(mask.at(0, 2), 1);
  EXPECT_EQ(mask.at(0, 3), 1);
}

TEST(LoadMask, ConstantFiles) {
  const auto dir = testing::scratch_dir("load_mask_const");
  write_constant_graymap(dir / "white.mask", 3, 5, 255);
  write_constant_graymap(dir / "black.mask", 3, 5, 0);
  EXPECT_EQ(load_mask(dir / "white.mask", 3, 5).ones(), 15u);
  EXPECT_EQ(load_mask(dir / "black.mask", 3, 5).ones(), 0u);
}

TEST(LoadMask, SizeMismatchAndMissingFileThrow) {
  const auto dir = testing::scratch_dir("load_mask_bad");
  write_constant_graymap(dir / "m.mask", 3, 5, 255);
  EXPECT_THROW(load_mask(dir / "m.mask", 5, 3), ShapeError);
  EXPECT_THROW(load_mask(dir / "absent.mask", 3, 5), IoError);
}

TEST(SaveMask, RoundTrips) {
  const auto dir = testing::scratch_dir("save_mask");
  BinaryMask mask(4, 3);
  mask.set(0, 0, true);
  mask.set(3, 2, true);
  save_mask(mask, dir / "x.mask");
  EXPECT_EQ(load_mask(dir / "x.mask", 4, 3), mask);
  EXPECT_EQ(mask_path_for(dir, "/data/img_01.ppm"), dir / "img_01.mask");
}

TEST(EdgeMask, ConstantImageHasNoEdges) {
  EXPECT_EQ(edge_mask(Tensor(3, 16, 16, 0.4), 3).ones(), 0u);
}

// Sobel responds on the two columns next to the step; dilation by r widens
// that to 2r + 2 columns.
TEST(EdgeMask, StepEdgeGivesBandOfWidthTwoRadiusPlusTwo) {
  const Tensor img = half_black_half_white(16);
  for (int r : {0, 1, 2, 3}) {
    const BinaryMask mask = edge_mask(img, r);
    for (int y = 0; y < 16; ++y) {
      int count = 0;
      for (int x = 0; x < 16; ++x) {
        const bool in_band = x >= 7 - r && x <= 8 + r;
        EXPECT_EQ(mask.at(y, x), in_band ? 1 : 0) << "r=" << r << " x=" << x;
        count += mask.at(y, x);
      }
      EXPECT_EQ(count, 2 * r + 2);
    }
  }
}

TEST(EdgeMask, DilationIsMonotone) {
  const Tensor img = synthetic_scene(48, 40, 3);
  const BinaryMask thin = edge_mask(img, 0);
  const BinaryMask wide = edge_mask(img, 3);
  EXPECT_GT(thin.ones(), 0u);
  EXPECT_TRUE(wide.contains(thin));
  EXPECT_GT(wide.ones(), thin.ones());
}

TEST(EdgeMask, Deterministic) {
  const Tensor img = synthetic_scene(32, 32, 4);
  EXPECT_EQ(edge_mask(img, 2), edge_mask(img, 2));
}

TEST(EdgeMask, RejectsNegativeRadius) {
  EXPECT_THROW(edge_mask(Tensor(3, 4, 4), -1), ConfigError);
}

TEST(Otsu, SeparatesTwoClusters) {
  std::vector<double> v(100, 0.1);
  for (int i = 0; i < 20; ++i) v.push_back(0.9);
  const double t = otsu_threshold(v);
  EXPECT_GT(t, 0.1);
  EXPECT_LE(t, 0.9);
  EXPECT_TRUE(std::isinf(otsu_threshold(std::vector<double>(5, 0.3))));
}

TEST(CropMask, CopiesWindowAndChecksBounds) {
  BinaryMask mask(4, 4);
  mask.set(2, 3, true);
  const BinaryMask c = crop_mask(mask, 1, 2, 2, 2);
  EXPECT_EQ(c.at(1, 1), 1);
  EXPECT_EQ(c.ones(), 1u);
  EXPECT_THROW(crop_mask(mask, 3, 3, 2, 2), ShapeError);
}

}  // namespace
}  // namespace sicm
