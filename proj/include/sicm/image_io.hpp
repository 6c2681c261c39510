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

#ifndef SICM_IMAGE_IO_HPP_
#define SICM_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sicm/tensor.hpp"

// 8-bit portable anymap I/O (binary P5/P6, ASCII P2/P3 on read).
namespace sicm {

struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;
};

// RGB image as a 3 x H x W tensor in [0, 1]. Graymaps are replicated to RGB.
Tensor read_image(const std::filesystem::path& path);
// Rounds to 8 bits after clamping to [0, 1].
void write_image(const Tensor& image, const std::filesystem::path& path);

GrayImage read_graymap(const std::filesystem::path& path);
void write_graymap(const GrayImage& image, const std::filesystem::path& path);

// Rounds every value to the nearest multiple of 1/255 (what write_image
// stores).
Tensor to_8bit(const Tensor& image);

// Sorted list of .ppm/.pgm/.pnm files in `dir`.
std::vector<std::filesystem::path> list_images(
    const std::filesystem::path& dir);

}  // namespace sicm

#endif  // SICM_IMAGE_IO_HPP_
