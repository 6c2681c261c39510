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

#ifndef SICM_LATENT_HPP_
#define SICM_LATENT_HPP_

#include <random>
#include <vector>

#include "sicm/tensor.hpp"

namespace sicm {

// Lower bound applied to every predicted Gaussian scale.
inline constexpr double kScaleFloor = 0.11;

// Quantized symbols are clipped to [-kMaxSymbol, kMaxSymbol] before coding.
inline constexpr int kMaxSymbol = 127;

// Ordered channel groups of a latent tensor. All groups share spatial size.
struct LatentGroups {
  std::vector<Tensor> groups;
  bool quantized = false;

  int count() const { return static_cast<int>(groups.size()); }
  int total_channels() const;
};

// Per-element conditional Gaussian. `scale` is already floored.
struct EntropyParams {
  Tensor mean;
  Tensor scale;
};

// Group i (0-based) holds channels [i*C/n, (i+1)*C/n).
LatentGroups split_groups(const Tensor& latent, int n);
Tensor concat_groups(const LatentGroups& groups);

enum class QuantMode { kTrain, kEval };

// kEval: round half away from zero. kTrain: additive U[-0.5, 0.5) noise drawn
// from `rng` (required in that mode).
Tensor quantize(const Tensor& latent, QuantMode mode,
                std::mt19937_64* rng = nullptr);

// Eval quantization followed by clipping to the coder's symbol support.
Tensor quantize_for_coding(const Tensor& latent);

bool is_integer_valued(const Tensor& t);

}  // namespace sicm

#endif  // SICM_LATENT_HPP_
