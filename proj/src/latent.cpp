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

#include "sicm/latent.hpp"

#include <algorithm>
#include <cmath>

#include "sicm/error.hpp"

namespace sicm {

int LatentGroups::total_channels() const {
  int c = 0;
  for (const Tensor& g : groups) c += g.channels();
  return c;
}

LatentGroups split_groups(const Tensor& latent, int n) {
  if (n <= 0) throw ConfigError("group count must be positive");
  if (latent.channels() % n != 0) {
    throw ConfigError("latent channels " + std::to_string(latent.channels()) +
                      " not divisible by group count " + std::to_string(n));
  }
  const int width = latent.channels() / n;
  LatentGroups out;
  out.quantized = is_integer_valued(latent);
  out.groups.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.groups.push_back(slice_channels(latent, i * width, (i + 1) * width));
  }
  return out;
}

Tensor concat_groups(const LatentGroups& groups) {
  if (groups.groups.empty()) throw ShapeError("concat of empty group list");
  return concat_channels(groups.groups);
}

Tensor quantize(const Tensor& latent, QuantMode mode, std::mt19937_64* rng) {
  Tensor out = latent;
  if (mode == QuantMode::kEval) {
    // + 0.0 folds -0.0 into +0.0 so decoded symbols compare bitwise.
    for (double& v : out.values()) v = std::round(v) + 0.0;
    return out;
  }
  if (!rng) throw Error("train-mode quantization needs a random generator");
  std::uniform_real_distribution<double> noise(-0.5, 0.5);
  for (double& v : out.values()) v += noise(*rng);
  return out;
}

Tensor quantize_for_coding(const Tensor& latent) {
  Tensor out = quantize(latent, QuantMode::kEval);
  for (double& v : out.values()) {
    v = std::clamp(v, -static_cast<double>(kMaxSymbol),
                   static_cast<double>(kMaxSymbol));
  }
  return out;
}

bool is_integer_valued(const Tensor& t) {
  for (double v : t.values()) {
    if (v != std::round(v)) return false;
  }
  return true;
}

}  // namespace sicm
