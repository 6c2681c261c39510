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

#ifndef SICM_MODEL_CONFIG_HPP_
#define SICM_MODEL_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sicm/kv_config.hpp"

namespace sicm {

// Registry of rate-distortion weights. A stream header stores the index.
inline constexpr std::array<double, 5> kLambdaTable = {0.005, 0.01, 0.02,
                                                       0.03, 0.05};
inline constexpr std::uint8_t kUnregisteredLambda = 0xFF;

std::uint8_t lambda_id(double lambda);
std::optional<double> lambda_from_id(std::uint8_t id);

struct ModelConfig {
  int latent_channels = 320;  // C
  int group_count = 5;        // n
  int enh_group_count = 5;    // m
  int downsample_factor = 16;
  // Output widths of every analysis stage except the last (which emits the
  // latent); one entry per stride-2 stage minus one. Synthesis mirrors them.
  std::vector<int> hidden_widths = {192, 192, 192};
  int hyper_channels = 192;
  int predictor_width = 128;
  int kernel = 5;
  double lambda = 0.01;
  std::uint64_t seed = 0;

  int group_width() const { return latent_channels / group_count; }
  int enh_channels() const { return enh_group_count * group_width(); }
  int stages() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  // Same latent geometry (C, n, s): required between base and enhancement.
  bool codec_compatible(const ModelConfig& other) const;

  KeyValueConfig to_kv() const;
  // Missing keys keep their defaults.
  static ModelConfig from_kv(const KeyValueConfig& kv);

  // Desk-scale configuration used by the tests and the toy experiments.
  static ModelConfig toy();

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace sicm

#endif  // SICM_MODEL_CONFIG_HPP_
