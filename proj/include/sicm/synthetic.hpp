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

#ifndef SICM_SYNTHETIC_HPP_
#define SICM_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "sicm/tensor.hpp"

namespace sicm {

// Procedural toy scenes: gradient background, a handful of flat or shaded
// rectangles / ellipses / triangles, and mild sinusoidal texture. Values are
// rounded to 8 bits so the scenes survive a trip through image files.
Tensor synthetic_scene(int height, int width, std::uint64_t seed);

std::vector<Tensor> synthetic_scenes(int count, int height, int width,
                                     std::uint64_t seed);

}  // namespace sicm

#endif  // SICM_SYNTHETIC_HPP_
