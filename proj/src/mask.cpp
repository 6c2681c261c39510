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

#include <algorithm>
#include <cmath>
#include <limits>

#include "sicm/error.hpp"
#include "sicm/image_io.hpp"

namespace sicm {

BinaryMask::BinaryMask(int height, int width, std::uint8_t fill)
    : height_(height), width_(width),
      bits_(static_cast<std::size_t>(height) * width, fill ? 1 : 0) {
  if (height < 0 || width < 0) throw ShapeError("negative mask size");
}

std::size_t BinaryMask::ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BinaryMask::contains(const BinaryMask& other) const {
  if (other.height_ != height_ || other.width_ != width_) return false;
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (other.bits_[j] && !bits_[j]) return false;
  }
  return true;
}

BinaryMask load_mask(const std::filesystem::path& path, int expected_height,
                     int expected_width) {
  const GrayImage gray = read_graymap(path);
  if (gray.height != expected_height || gray.width != expected_width) {
    throw ShapeError(path.string() + ": mask is " +
                     std::to_string(gray.width) + "x" +
                     std::to_string(gray.height) + ", image is " +
                     std::to_string(expected_width) + "x" +
                     std::to_string(expected_height));
  }
  BinaryMask mask(gray.height, gray.width);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x)
      mask.set(y, x, gray.pixels[y * gray.width + x] >= 128);
  return mask;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  GrayImage gray{mask.height(), mask.width(), {}};
  gray.pixels.reserve(mask.bits().size());
  for (std::uint8_t b : mask.bits()) gray.pixels.push_back(b ? 255 : 0);
  write_graymap(gray, path);
}

std::filesystem::path mask_path_for(const std::filesystem::path& dir,
                                    const std::filesystem::path& image) {
  return dir / (image.stem().string() + ".mask");
}

double otsu_threshold(const std::vector<double>& values, int bins) {
  if (values.empty()) return std::numeric_limits<double>::infinity();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double hi = *hi_it;
  if (!(hi > *lo_it)) return std::numeric_limits<double>::infinity();
  std::vector<double> hist(bins, 0.0);
  auto bin_of = [&](double v) {
    return std::min(bins - 1, static_cast<int>(v / hi * bins));
  };
  for (double v : values) hist[bin_of(v)] += 1.0;
  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int k = 0; k < bins; ++k) sum_all += k * hist[k];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_k = 0;
  for (int k = 0; k + 1 < bins; ++k) {
    w0 += hist[k];
    sum0 += k * hist[k];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_k = k;
    }
  }
  return static_cast<double>(best_k + 1) * hi / bins;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw ConfigError("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int h = mask.height(), w = mask.width();
  // Separable: horizontal then vertical max filter.
  BinaryMask rows(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool on = false;
      for (int dx = -radius; dx <= radius && !on; ++dx) {
        const int xx = x + dx;
        on = xx >= 0 && xx < w && mask.at(y, xx);
      }
      rows.set(y, x, on);
    }
  BinaryMask out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool on = false;
      for (int dy = -radius; dy <= radius && !on; ++dy) {
        const int yy = y + dy;
        on = yy >= 0 && yy < h && rows.at(yy, x);
      }
      out.set(y, x, on);
    }
  return out;
}

BinaryMask edge_mask(const Tensor& image, int dilation_radius) {
  if (dilation_radius < 0) throw ConfigError("dilation radius must be >= 0");
  if (image.channels() != 3) throw ShapeError("edge_mask expects RGB");
  const int h = image.height(), w = image.width();
  std::vector<double> luma(static_cast<std::size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      luma[y * w + x] = 0.299 * image.at(0, y, x) +
                        0.587 * image.at(1, y, x) + 0.114 * image.at(2, y, x);
  auto px = [&](int y, int x) {
    return luma[std::clamp(y, 0, h - 1) * w + std::clamp(x, 0, w - 1)];
  };
  std::vector<double> magnitude(luma.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = (px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2 * px(y, x - 1) + px(y + 1, x - 1));
      const double gy = (px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2 * px(y - 1, x) + px(y - 1, x + 1));
      magnitude[y * w + x] = std::hypot(gx, gy);
    }
  const double threshold = otsu_threshold(magnitude);
  BinaryMask edges(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = magnitude[y * w + x];
      edges.set(y, x, m > 0.0 && m >= threshold);
    }
  return dilate(edges, dilation_radius);
}

BinaryMask crop_mask(const BinaryMask& mask, int top, int left, int rows,
                     int cols) {
  if (top < 0 || left < 0 || top + rows > mask.height() ||
      left + cols > mask.width()) {
    throw ShapeError("mask crop out of range");
  }
  BinaryMask out(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) out.set(y, x, mask.at(top + y, left + x));
  return out;
}

}  // namespace sicm
