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

#include "sicm/codec.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sicm/checkpoint.hpp"
#include "sicm/entropy_coder.hpp"
#include "sicm/error.hpp"
#include "sicm/fusion.hpp"

namespace sicm {

namespace {

void encode_tensor(RangeEncoder& enc, const Tensor& symbols,
                   const EntropyParams& params) {
  const std::vector<CdfTable> tables = build_cdfs(params);
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    enc.encode_symbol(static_cast<int>(symbols[j]), tables[j]);
  }
}

Tensor decode_tensor(RangeDecoder& dec, const EntropyParams& params) {
  const std::vector<CdfTable> tables = build_cdfs(params);
  Tensor out(params.mean.channels(), params.mean.height(), params.mean.width());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = static_cast<double>(dec.decode_symbol(tables[j]));
  }
  return out;
}

int padded(int size, int factor) { return (size + factor - 1) / factor * factor; }

struct LatentSize {
  int height;
  int width;
};

LatentSize latent_size(const ScalableBitstream& s, int factor) {
  return {padded(s.height, factor) / factor, padded(s.width, factor) / factor};
}

void check_base(const ScalableBitstream& s, const BaseModel& base) {
  if (s.model_hash != model_hash(base)) {
    throw ModelMismatchError("stream was not produced with this base model");
  }
  if (s.n != base.config.group_count) {
    throw ModelMismatchError("stream group count differs from the base model");
  }
}

Tensor finish_image(const Tensor& decoded, const ScalableBitstream& s) {
  return crop(decoded, s.height, s.width);
}

}  // namespace

EncodedLayer encode_layer(const Tensor& x, const LatentCodec& codec) {
  const Tensor y = analyze(x, codec);
  EncodedLayer out;
  out.z_hat = quantize_for_coding(hyper_encode(y, codec));
  {
    RangeEncoder enc;
    encode_tensor(enc,
                  out.z_hat,
                  hyper_prior_params(codec, out.z_hat.height(),
                                     out.z_hat.width()));
    out.z_stream = enc.finish();
  }
  const Tensor context = hyper_decode(out.z_hat, codec, y.height(), y.width());
  const LatentGroups rounded =
      split_groups(quantize_for_coding(y), codec.groups());
  out.y_hat.quantized = true;
  RangeEncoder enc;
  for (int i = 0; i < codec.groups(); ++i) {
    const EntropyParams params =
        group_entropy_params(i, context, out.y_hat, codec);
    encode_tensor(enc, rounded.groups[i], params);
    out.y_hat.groups.push_back(rounded.groups[i]);
  }
  out.y_stream = enc.finish();
  return out;
}

DecodedLayer decode_layer(std::span<const std::uint8_t> z_stream,
                          std::span<const std::uint8_t> y_stream,
                          const LatentCodec& codec, int latent_height,
                          int latent_width, const GroupCallback& on_group) {
  // Hyper latent size follows the two stride-2 stages of the hyper analysis.
  const int zh = (latent_height + 3) / 4;
  const int zw = (latent_width + 3) / 4;
  DecodedLayer out;
  {
    RangeDecoder dec(z_stream);
    out.z_hat = decode_tensor(dec, hyper_prior_params(codec, zh, zw));
  }
  const Tensor context =
      hyper_decode(out.z_hat, codec, latent_height, latent_width);
  out.y_hat.quantized = true;
  RangeDecoder dec(y_stream);
  for (int i = 0; i < codec.groups(); ++i) {
    const EntropyParams params =
        group_entropy_params(i, context, out.y_hat, codec);
    out.y_hat.groups.push_back(decode_tensor(dec, params));
    out.group_end.push_back(dec.consumed());
    if (on_group) on_group(i, out.y_hat.groups.back());
  }
  return out;
}

ScalableBitstream encode_image(const Tensor& x, const BaseModel& base,
                               const EnhancementModel* enh) {
  if (x.channels() != 3) throw ShapeError("encode_image expects RGB");
  if (x.height() > std::numeric_limits<std::uint16_t>::max() ||
      x.width() > std::numeric_limits<std::uint16_t>::max()) {
    throw ShapeError("image too large for the container header");
  }
  const std::uint64_t base_hash = model_hash(base);
  if (enh) {
    if (!base.config.codec_compatible(enh->config)) {
      throw ModelMismatchError(
          "enhancement model config (C, n, s) differs from the base model");
    }
    if (enh->base_hash != base_hash) {
      throw ModelMismatchError(
          "enhancement model was trained against a different base model");
    }
  }
  const Tensor padded_x = reflect_pad(x, base.config.downsample_factor);

  ScalableBitstream s;
  s.width = static_cast<std::uint16_t>(x.width());
  s.height = static_cast<std::uint16_t>(x.height());
  s.n = static_cast<std::uint8_t>(base.config.group_count);
  s.lambda_id = lambda_id(base.config.lambda);
  s.model_hash = base_hash;
  EncodedLayer layer = encode_layer(padded_x, base.codec);
  s.z = std::move(layer.z_stream);
  s.y = std::move(layer.y_stream);
  if (enh) {
    EncodedLayer extra = encode_layer(padded_x, enh->codec);
    s.flags |= kFlagEnhancement;
    s.m = static_cast<std::uint8_t>(enh->config.enh_group_count);
    s.za = std::move(extra.z_stream);
    s.ya = std::move(extra.y_stream);
  }
  return s;
}

LatentGroups decode_base_latent(std::span<const std::uint8_t> bytes,
                                const BaseModel& base) {
  const ScalableBitstream s = parse_bitstream(bytes, ParseMode::kBaseOnly);
  check_base(s, base);
  const LatentSize ls = latent_size(s, base.config.downsample_factor);
  return decode_layer(s.z, s.y, base.codec, ls.height, ls.width).y_hat;
}

Tensor decode_machine(std::span<const std::uint8_t> bytes,
                      const BaseModel& base) {
  const ScalableBitstream s = parse_bitstream(bytes, ParseMode::kBaseOnly);
  check_base(s, base);
  const LatentSize ls = latent_size(s, base.config.downsample_factor);
  const LatentGroups y_hat =
      decode_layer(s.z, s.y, base.codec, ls.height, ls.width).y_hat;
  return finish_image(synth_machine(y_hat, base), s);
}

Tensor decode_human(std::span<const std::uint8_t> bytes, const BaseModel& base,
                    const EnhancementModel& enh) {
  const ScalableBitstream s = parse_bitstream(bytes, ParseMode::kFull);
  if (!s.has_enhancement()) {
    throw LayerMissingError("stream carries no enhancement layer");
  }
  check_base(s, base);
  if (enh.base_hash != s.model_hash) {
    throw ModelMismatchError(
        "enhancement model was trained against a different base model");
  }
  if (s.m != enh.config.enh_group_count) {
    throw ModelMismatchError("stream m differs from the enhancement model");
  }
  const LatentSize ls = latent_size(s, base.config.downsample_factor);
  const LatentGroups y_hat =
      decode_layer(s.z, s.y, base.codec, ls.height, ls.width).y_hat;
  const LatentGroups ya_hat =
      decode_layer(s.za, s.ya, enh.codec, ls.height, ls.width).y_hat;
  return finish_image(synth_human(fuse_groups(y_hat, ya_hat), enh), s);
}

}  // namespace sicm
