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

#ifndef SICM_MODEL_HPP_
#define SICM_MODEL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sicm/latent.hpp"
#include "sicm/layers.hpp"
#include "sicm/losses.hpp"
#include "sicm/model_config.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

// One channel-conditional latent coder: analysis transform, hyperprior pair,
// factorized prior on the hyper latent, and one entropy-parameter predictor
// per latent group. Group i's predictor sees [hyper context, groups 0..i-1].
class LatentCodec {
 public:
  LatentCodec() = default;
  LatentCodec(const std::string& prefix, const ModelConfig& config,
              int groups);

  int groups() const { return groups_; }
  int group_width() const { return group_width_; }
  int latent_channels() const { return groups_ * group_width_; }
  int context_channels() const { return 2 * latent_channels(); }
  int downsample_factor() const { return downsample_; }

  void initialize(std::mt19937_64& rng);
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  ConvNet analysis;
  ConvNet hyper_analysis;
  ConvNet hyper_synthesis;
  std::vector<ConvNet> predictors;
  Parameter prior_mean;       // per hyper channel
  Parameter prior_log_scale;  // per hyper channel

 private:
  int groups_ = 0;
  int group_width_ = 0;
  int downsample_ = 0;
};

// Machine-vision layer (also used, with plain MSE, as the residual codec of
// the difference-compression baseline).
struct BaseModel {
  BaseModel() = default;
  explicit BaseModel(const ModelConfig& config);

  void initialize();  // seeded from config.seed
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  ModelConfig config;
  LatentCodec codec;
  ConvNet synthesis;
};

// Additional-information layer: codes m groups and decodes the fused n-group
// latent.
struct EnhancementModel {
  EnhancementModel() = default;
  // Requires config.enh_group_count <= config.group_count.
  explicit EnhancementModel(const ModelConfig& config);

  void initialize();
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  ModelConfig config;
  std::uint64_t base_hash = 0;  // hash of the base model it was trained with
  LatentCodec codec;
  ConvNet synthesis;
};

// ----- inference operations -----

// x must be 3 x H x W with H, W multiples of the downsample factor.
Tensor analyze(const Tensor& x, const LatentCodec& codec);
Tensor analyze_base(const Tensor& x, const BaseModel& model);
LatentGroups analyze_enhancement(const Tensor& x, const EnhancementModel& model);

Tensor hyper_encode(const Tensor& y, const LatentCodec& codec);
// Context (2 * channels) cropped to the latent's spatial size.
Tensor hyper_decode(const Tensor& z_hat, const LatentCodec& codec,
                    int latent_height, int latent_width);
// Factorized prior parameters broadcast to a hyper latent of the given size.
EntropyParams hyper_prior_params(const LatentCodec& codec, int height,
                                 int width);

// Parameters for group `index` (0-based). `previous` must hold exactly
// `index` decoded groups; nothing else influences the result.
EntropyParams group_entropy_params(int index, const Tensor& context,
                                   const LatentGroups& previous,
                                   const LatentCodec& codec);

// Decoded images are clamped to [0, 1].
Tensor synth_machine(const LatentGroups& y_hat, const BaseModel& model);
Tensor synth_human(const LatentGroups& fused, const EnhancementModel& model);

std::size_t count_parameters(const EnhancementModel& model);
std::size_t count_parameters(const BaseModel& model);

// ----- training passes -----

// Everything recorded by a train-mode pass of a LatentCodec. The latent fed
// to synthesis is `latent_noisy`; predictor conditioning uses eval-rounded
// groups.
struct CodecPass {
  ConvNet::Cache analysis_cache;
  ConvNet::Cache hyper_analysis_cache;
  ConvNet::Cache hyper_synthesis_cache;
  std::vector<ConvNet::Cache> predictor_caches;
  std::vector<Tensor> predictor_outputs;
  Tensor latent;
  Tensor latent_noisy;
  Tensor z_noisy;
  Tensor context_full;
  std::vector<EntropyParams> params;
  std::vector<RateGradients> rate_grads;
  RateGradients z_rate_grads;
  double rate_y_bits = 0.0;
  double rate_z_bits = 0.0;
};

CodecPass train_forward(const LatentCodec& codec, const Tensor& x,
                        std::mt19937_64& rng);

// Backpropagates rate_weight * (rate_y + rate_z) plus the synthesis gradient
// `grad_latent` (d loss / d latent_noisy; may be empty) into every codec
// parameter.
void train_backward(LatentCodec& codec, const CodecPass& pass,
                    const Tensor& grad_latent, double rate_weight);

// Decoder output before clamping (training distortion uses this).
Tensor synthesize_raw(const ConvNet& synthesis, const Tensor& latent,
                      ConvNet::Cache* cache = nullptr);

}  // namespace sicm

#endif  // SICM_MODEL_HPP_
