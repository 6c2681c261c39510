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

#ifndef SICM_FUSION_HPP_
#define SICM_FUSION_HPP_

#include "sicm/latent.hpp"

namespace sicm {

// Merges m enhancement groups into the first m of n base groups:
//   fused_k = base_k + enh_k   for k < m
//   fused_k = base_k           for k >= m (bitwise copy)
// The sum is not re-quantized.
LatentGroups fuse_groups(const LatentGroups& base, const LatentGroups& enh);

// Gradient of a loss w.r.t. the enhancement groups given its gradient w.r.t.
// the fused groups: the first m groups pass straight through.
LatentGroups fuse_groups_backward_enh(const LatentGroups& grad_fused, int m);

}  // namespace sicm

#endif  // SICM_FUSION_HPP_
