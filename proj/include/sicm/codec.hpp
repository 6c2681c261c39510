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

#ifndef SICM_CODEC_HPP_
#define SICM_CODEC_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sicm/bitstream.hpp"
#include "sicm/latent.hpp"
#include "sicm/model.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

// Symbols and streams of one coded layer (base or enhancement).
struct EncodedLayer {
  std::vector<std::uint8_t> z_stream;
  std::vector<std::uint8_t> y_stream;
  Tensor z_hat;
  LatentGroups y_hat;
};

struct DecodedLayer {
  Tensor z_hat;
  LatentGroups y_hat;
  // y_stream bytes consumed once group i was fully decoded. Bytes at or past
  // group_end[i - 1] cannot influence groups 0..i-1.
  std::vector<std::size_t> group_end;
};

// Called after each group is decoded, before the next one starts.
using GroupCallback = std::function<void(int index, const Tensor& group)>;

// `x` must already be padded to the codec's downsample factor. Groups are
// coded in order, each with tables conditioned on the previously coded
// (clipped, rounded) groups.
EncodedLayer encode_layer(const Tensor& x, const LatentCodec& codec);
DecodedLayer decode_layer(std::span<const std::uint8_t> z_stream,
                          std::span<const std::uint8_t> y_stream,
                          const LatentCodec& codec, int latent_height,
                          int latent_width,
                          const GroupCallback& on_group = nullptr);

// Encodes the base layer and, when `enh` is non-null, the enhancement layer.
// Throws ModelMismatchError when enh was not trained against `base`.
ScalableBitstream encode_image(const Tensor& x, const BaseModel& base,
                               const EnhancementModel* enh = nullptr);

// Reads only the header and base sections.
Tensor decode_machine(std::span<const std::uint8_t> bytes,
                      const BaseModel& base);
// Throws LayerMissingError when the stream has no enhancement layer.
Tensor decode_human(std::span<const std::uint8_t> bytes, const BaseModel& base,
                    const EnhancementModel& enh);

// Decoded base latent ŷ (used by decode_machine and decode_human alike).
LatentGroups decode_base_latent(std::span<const std::uint8_t> bytes,
                                const BaseModel& base);

}  // namespace sicm

#endif  // SICM_CODEC_HPP_
