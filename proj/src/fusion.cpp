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

#include "sicm/fusion.hpp"

#include <string>

#include "sicm/error.hpp"

namespace sicm {

LatentGroups fuse_groups(const LatentGroups& base, const LatentGroups& enh) {
  const int n = base.count();
  const int m = enh.count();
  if (m > n) {
    throw ConfigError("fusion needs m <= n (m=" + std::to_string(m) +
                      ", n=" + std::to_string(n) + ")");
  }
  LatentGroups out;
  out.groups.reserve(n);
  for (int k = 0; k < m; ++k) {
    if (!base.groups[k].same_shape(enh.groups[k])) {
      throw ShapeError("fusion: group " + std::to_string(k) +
                       " shape differs between base and enhancement");
    }
    Tensor sum = base.groups[k];
    sum += enh.groups[k];
    out.groups.push_back(std::move(sum));
  }
  for (int k = m; k < n; ++k) out.groups.push_back(base.groups[k]);
  out.quantized = base.quantized && enh.quantized;
  return out;
}

LatentGroups fuse_groups_backward_enh(const LatentGroups& grad_fused, int m) {
  if (m > grad_fused.count()) throw ConfigError("fusion backward: m > n");
  LatentGroups out;
  out.groups.assign(grad_fused.groups.begin(), grad_fused.groups.begin() + m);
  return out;
}

}  // namespace sicm
