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

#ifndef SICM_TESTS_TEST_UTIL_HPP_
#define SICM_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <random>
#include <string>

#include "sicm/model_config.hpp"
#include "sicm/tensor.hpp"

namespace sicm::testing {

// Two stride-2 stages, C = 8: small enough for exhaustive checks.
inline ModelConfig tiny_config() {
  ModelConfig c;
  c.latent_channels = 8;
  c.group_count = 2;
  c.enh_group_count = 2;
  c.downsample_factor = 4;
  c.hidden_widths = {6};
  c.hyper_channels = 4;
  c.predictor_width = 6;
  c.kernel = 3;
  c.lambda = 0.01;
  c.seed = 5;
  return c;
}

inline Tensor random_tensor(int c, int h, int w, std::uint64_t seed,
                            double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor t(c, h, w);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sicm_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sicm::testing

#endif  // SICM_TESTS_TEST_UTIL_HPP_
