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

#include "sicm/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "sicm/image_io.hpp"

namespace sicm {

namespace {

using Color = std::array<double, 3>;

Color random_color(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  return {u(rng), u(rng), u(rng)};
}

double edge_side(double ax, double ay, double bx, double by, double px,
                 double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

}  // namespace

Tensor synthetic_scene(int height, int width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Tensor img(3, height, width);

  const Color c0 = random_color(rng), c1 = random_color(rng);
  const double angle = u(rng) * 2.0 * std::numbers::pi;
  const double dx = std::cos(angle), dy = std::sin(angle);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double t = std::clamp(
          0.5 + 0.5 * ((x - width / 2.0) * dx + (y - height / 2.0) * dy) /
                    (0.5 * std::max(width, height)),
          0.0, 1.0);
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = (1 - t) * c0[c] + t * c1[c];
    }

  const int shapes = 3 + static_cast<int>(u(rng) * 4);
  for (int s = 0; s < shapes; ++s) {
    const int kind = static_cast<int>(u(rng) * 3);
    const Color color = random_color(rng);
    const double cx = u(rng) * width, cy = u(rng) * height;
    const double rx = (0.1 + 0.3 * u(rng)) * width;
    const double ry = (0.1 + 0.3 * u(rng)) * height;
    const double freq = 0.2 + 0.6 * u(rng);
    const double phase = u(rng) * 2.0 * std::numbers::pi;
    const double texture = 0.06 * u(rng);
    const double shade = 0.3 * (u(rng) - 0.5);
    std::array<double, 6> tri{};
    for (double& v : tri) v = u(rng);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        bool inside = false;
        if (kind == 0) {
          inside = std::abs(x - cx) <= rx && std::abs(y - cy) <= ry;
        } else if (kind == 1) {
          const double nx = (x - cx) / rx, ny = (y - cy) / ry;
          inside = nx * nx + ny * ny <= 1.0;
        } else {
          const double ax = tri[0] * width, ay = tri[1] * height;
          const double bx = tri[2] * width, by = tri[3] * height;
          const double qx = tri[4] * width, qy = tri[5] * height;
          const double d1 = edge_side(ax, ay, bx, by, x, y);
          const double d2 = edge_side(bx, by, qx, qy, x, y);
          const double d3 = edge_side(qx, qy, ax, ay, x, y);
          inside = (d1 >= 0 && d2 >= 0 && d3 >= 0) ||
                   (d1 <= 0 && d2 <= 0 && d3 <= 0);
        }
        if (!inside) continue;
        const double tex =
            texture * std::sin(freq * x + phase) * std::cos(freq * 0.7 * y);
        const double grad = shade * (y - cy) / std::max(1.0, ry);
        for (int c = 0; c < 3; ++c) {
          img.at(c, y, x) = std::clamp(color[c] + tex + grad, 0.0, 1.0);
        }
      }
  }
  return to_8bit(img);
}

std::vector<Tensor> synthetic_scenes(int count, int height, int width,
                                     std::uint64_t seed) {
  std::vector<Tensor> out;
  out.reserve(count);
  std::mt19937_64 seeds(seed);
  for (int i = 0; i < count; ++i) {
    out.push_back(synthetic_scene(height, width, seeds()));
  }
  return out;
}

}  // namespace sicm
