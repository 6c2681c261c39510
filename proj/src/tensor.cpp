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

#include "sicm/tensor.hpp"

#include <algorithm>
#include <cstring>

#include "sicm/error.hpp"

namespace sicm {

Tensor::Tensor(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0) {
    throw ShapeError("negative tensor dimension");
  }
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!same_shape(other)) throw ShapeError("tensor add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

bool bit_equal(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  return a.size() == 0 ||
         std::memcmp(a.values().data(), b.values().data(),
                     a.size() * sizeof(double)) == 0;
}

Tensor slice_channels(const Tensor& t, int begin, int end) {
  if (begin < 0 || end > t.channels() || begin > end) {
    throw ShapeError("channel slice out of range");
  }
  Tensor out(end - begin, t.height(), t.width());
  auto src = t.values().subspan(begin * t.plane_size(),
                                (end - begin) * t.plane_size());
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

Tensor concat_channels(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat of zero tensors");
  const int h = parts.front().height();
  const int w = parts.front().width();
  int total = 0;
  for (const Tensor& p : parts) {
    if (p.height() != h || p.width() != w) {
      throw ShapeError("concat: spatial size mismatch");
    }
    total += p.channels();
  }
  Tensor out(total, h, w);
  auto dst = out.values().begin();
  for (const Tensor& p : parts) {
    dst = std::copy(p.values().begin(), p.values().end(), dst);
  }
  return out;
}

Tensor crop(const Tensor& t, int height, int width) {
  if (height > t.height() || width > t.width()) {
    throw ShapeError("crop larger than tensor");
  }
  Tensor out(t.channels(), height, width);
  for (int c = 0; c < t.channels(); ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out.at(c, y, x) = t.at(c, y, x);
  return out;
}

namespace {

// Whole-sample symmetric reflection (no edge repeat), valid for any offset.
int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

Tensor reflect_pad(const Tensor& t, int multiple) {
  if (multiple <= 0) throw ShapeError("pad multiple must be positive");
  if (t.height() == 0 || t.width() == 0) throw ShapeError("empty image");
  const int h = (t.height() + multiple - 1) / multiple * multiple;
  const int w = (t.width() + multiple - 1) / multiple * multiple;
  if (h == t.height() && w == t.width()) return t;
  Tensor out(t.channels(), h, w);
  for (int c = 0; c < t.channels(); ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out.at(c, y, x) = t.at(c, mirror(y, t.height()), mirror(x, t.width()));
  return out;
}

}  // namespace sicm
