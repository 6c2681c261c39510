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

#include "sicm/model_config.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "sicm/error.hpp"

namespace sicm {

std::uint8_t lambda_id(double lambda) {
  for (std::size_t i = 0; i < kLambdaTable.size(); ++i) {
    if (std::abs(kLambdaTable[i] - lambda) <= 1e-12) {
      return static_cast<std::uint8_t>(i);
    }
  }
  return kUnregisteredLambda;
}

std::optional<double> lambda_from_id(std::uint8_t id) {
  if (id >= kLambdaTable.size()) return std::nullopt;
  return kLambdaTable[id];
}

int ModelConfig::stages() const {
  return std::countr_zero(static_cast<unsigned>(downsample_factor));
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (latent_channels <= 0) fail("latent_channels must be positive");
  if (group_count <= 0) fail("group count n must be positive");
  if (latent_channels % group_count != 0) {
    fail("latent_channels " + std::to_string(latent_channels) +
         " not divisible by n=" + std::to_string(group_count));
  }
  if (enh_group_count < 1 || enh_group_count > group_count) {
    fail("enhancement group count m must satisfy 1 <= m <= n");
  }
  if (downsample_factor < 2 || !std::has_single_bit(
                                   static_cast<unsigned>(downsample_factor))) {
    fail("downsample_factor must be a power of two >= 2");
  }
  if (static_cast<int>(hidden_widths.size()) != stages() - 1) {
    fail("hidden_widths needs " + std::to_string(stages() - 1) +
         " entries for downsample_factor " + std::to_string(downsample_factor));
  }
  for (int w : hidden_widths) {
    if (w <= 0) fail("hidden widths must be positive");
  }
  if (hyper_channels <= 0 || predictor_width <= 0) {
    fail("hyper_channels and predictor_width must be positive");
  }
  if (kernel <= 0 || kernel % 2 == 0) fail("kernel must be a positive odd number");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be > 0");
}

bool ModelConfig::codec_compatible(const ModelConfig& other) const {
  return latent_channels == other.latent_channels &&
         group_count == other.group_count &&
         downsample_factor == other.downsample_factor;
}

KeyValueConfig ModelConfig::to_kv() const {
  KeyValueConfig kv;
  kv.set("latent_channels", std::to_string(latent_channels));
  kv.set("n", std::to_string(group_count));
  kv.set("m", std::to_string(enh_group_count));
  kv.set("downsample", std::to_string(downsample_factor));
  std::string widths;
  for (std::size_t i = 0; i < hidden_widths.size(); ++i) {
    widths += (i ? "," : "") + std::to_string(hidden_widths[i]);
  }
  kv.set("hidden_widths", widths);
  kv.set("hyper_channels", std::to_string(hyper_channels));
  kv.set("predictor_width", std::to_string(predictor_width));
  kv.set("kernel", std::to_string(kernel));
  kv.set("lambda", format_double(lambda));
  kv.set("seed", std::to_string(seed));
  return kv;
}

ModelConfig ModelConfig::from_kv(const KeyValueConfig& kv) {
  ModelConfig c;
  c.latent_channels = kv.get_int_or("latent_channels", c.latent_channels);
  c.group_count = kv.get_int_or("n", c.group_count);
  c.enh_group_count = kv.get_int_or("m", c.enh_group_count);
  c.downsample_factor = kv.get_int_or("downsample", c.downsample_factor);
  if (kv.has("hidden_widths")) c.hidden_widths = kv.get_int_list("hidden_widths");
  c.hyper_channels = kv.get_int_or("hyper_channels", c.hyper_channels);
  c.predictor_width = kv.get_int_or("predictor_width", c.predictor_width);
  c.kernel = kv.get_int_or("kernel", c.kernel);
  c.lambda = kv.get_double_or("lambda", c.lambda);
  c.seed = kv.get_u64_or("seed", c.seed);
  return c;
}

ModelConfig ModelConfig::toy() {
  ModelConfig c;
  c.latent_channels = 40;
  c.group_count = 5;
  c.enh_group_count = 5;
  c.downsample_factor = 16;
  c.hidden_widths = {16, 24, 32};
  c.hyper_channels = 16;
  c.predictor_width = 32;
  c.kernel = 5;
  c.lambda = 0.01;
  c.seed = 1;
  return c;
}

}  // namespace sicm
