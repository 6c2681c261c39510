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

#ifndef SICM_MASK_HPP_
#define SICM_MASK_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sicm/tensor.hpp"

namespace sicm {

// H x W map with values in {0, 1}; broadcast over the three image channels.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, std::uint8_t fill = 0);

  int height() const { return height_; }
  int width() const { return width_; }
  std::uint8_t at(int y, int x) const { return bits_[y * width_ + x]; }
  void set(int y, int x, bool on) { bits_[y * width_ + x] = on ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t ones() const;

  bool matches(const Tensor& image) const {
    return image.height() == height_ && image.width() == width_;
  }
  bool contains(const BinaryMask& other) const;  // other ⊆ this

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

inline constexpr int kDefaultDilationRadius = 2;

// Reads a single-channel 8-bit graymap; pixels >= 128 map to 1.
BinaryMask load_mask(const std::filesystem::path& path, int expected_height,
                     int expected_width);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

// Mask file name for an image: <stem>.mask in `dir`.
std::filesystem::path mask_path_for(const std::filesystem::path& dir,
                                    const std::filesystem::path& image);

// Sobel gradient magnitude on luma, Otsu threshold, square dilation.
// A flat image (no gradient anywhere) yields an all-zero mask.
BinaryMask edge_mask(const Tensor& image,
                     int dilation_radius = kDefaultDilationRadius);

// Exposed for testing: binary dilation with a (2r+1)^2 square.
BinaryMask dilate(const BinaryMask& mask, int radius);

// Otsu threshold over non-negative values; values >= the returned threshold
// are foreground. Returns +inf when all values are equal.
double otsu_threshold(const std::vector<double>& values, int bins = 256);

// Crops a rows x cols window at (top, left).
BinaryMask crop_mask(const BinaryMask& mask, int top, int left, int rows,
                     int cols);

}  // namespace sicm

#endif  // SICM_MASK_HPP_
