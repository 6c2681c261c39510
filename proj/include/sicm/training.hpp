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

#ifndef SICM_TRAINING_HPP_
#define SICM_TRAINING_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sicm/layers.hpp"
#include "sicm/losses.hpp"
#include "sicm/mask.hpp"
#include "sicm/model.hpp"
#include "sicm/model_config.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

// Mirrors the key-value training config file. Model keys (latent_channels,
// n, m, downsample, hidden_widths, hyper_channels, predictor_width, kernel,
// lambda, seed) are read into `model`.
struct TrainConfig {
  std::filesystem::path dataset;
  std::filesystem::path mask_dir;  // empty: derive edge masks
  int crop = 64;
  int batch = 8;
  int steps = 2000;
  double learning_rate = 1e-4;
  int lr_decay_step = 0;   // 0 disables the step decay
  double lr_decay = 0.1;   // multiplier applied once at lr_decay_step
  double grad_clip = 1.0;
  int dilation = kDefaultDilationRadius;
  int checkpoint_interval = 0;  // 0: only the final checkpoint
  std::filesystem::path log_path;
  ModelConfig model;

  void validate() const;
  static TrainConfig from_kv(const KeyValueConfig& kv);
  static TrainConfig load(const std::filesystem::path& path);
  KeyValueConfig to_kv() const;

  // Training objectives use rates in bits per pixel and this weight on MSE
  // of [0,1] images, so lambdas from kLambdaTable keep their usual scale.
  double distortion_weight() const { return model.lambda * 255.0 * 255.0; }
};

struct TrainingSample {
  std::string name;
  Tensor image;
  BinaryMask mask;  // empty when the stage does not use masks
};

using Dataset = std::vector<TrainingSample>;

// Loads every image in config.dataset. With `with_masks`, masks come from
// config.mask_dir (all must exist) or, when that is empty, from edge_mask.
Dataset load_dataset(const TrainConfig& config, bool with_masks);

// In-memory dataset; masks are derived with edge_mask when requested.
Dataset make_dataset(const std::vector<Tensor>& images, bool with_masks,
                     int dilation = kDefaultDilationRadius);

// Adaptive-moment optimizer over a fixed parameter list.
class Adam {
 public:
  explicit Adam(std::vector<Parameter*> params, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);
  void step(double learning_rate);

 private:
  std::vector<Parameter*> params_;
  std::vector<std::vector<double>> m_, v_;
  double beta1_, beta2_, epsilon_;
  long t_ = 0;
};

// Scales gradients so their global L2 norm is at most max_norm; returns the
// norm before scaling.
double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm);

struct TrainLogRow {
  int step = 0;
  LossBreakdown loss;  // batch means; rates in bits per pixel
};

struct TrainStats {
  std::vector<TrainLogRow> log;
  double initial_loss = 0.0;  // mean total over the first window of steps
  double final_loss = 0.0;    // mean total over the last window
};

enum class BaseObjective {
  kMasked,  // SA-ICM: rate + lambda * masked MSE
  kPlain,   // ordinary LIC: rate + lambda * MSE
};

// One training sample of the base objective: forward with quantization
// noise drawn from `rng`, then accumulates grad_scale * d(total)/d(params)
// into the parameter gradients. `mask` == nullptr selects the plain
// objective. Rates in the result are bits per pixel of x.
LossBreakdown accumulate_base_gradients(BaseModel& model, const Tensor& x,
                                        const BinaryMask* mask,
                                        double distortion_weight,
                                        double grad_scale,
                                        std::mt19937_64& rng);

// Same for the enhancement objective against a frozen base; only the
// enhancement model's gradients are touched.
LossBreakdown accumulate_enhancement_gradients(EnhancementModel& model,
                                               const BaseModel& base,
                                               const Tensor& x,
                                               double distortion_weight,
                                               double grad_scale,
                                               std::mt19937_64& rng);

// Stage 1. Trains a fresh BaseModel(config.model). When `checkpoint_path`
// is set, writes it every config.checkpoint_interval steps.
BaseModel train_base(const TrainConfig& config, const Dataset& data,
                     BaseObjective objective = BaseObjective::kMasked,
                     TrainStats* stats = nullptr,
                     const std::filesystem::path& checkpoint_path = {});

// Stage 2. Trains EnhancementModel(config.model) against a frozen `base`;
// only enhancement parameters are updated.
EnhancementModel train_enhancement(
    const TrainConfig& config, const Dataset& data, const BaseModel& base,
    TrainStats* stats = nullptr,
    const std::filesystem::path& checkpoint_path = {});

void write_train_log(const std::vector<TrainLogRow>& log,
                     const std::filesystem::path& path);

}  // namespace sicm

#endif  // SICM_TRAINING_HPP_
