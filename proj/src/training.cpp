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

#include "sicm/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "sicm/checkpoint.hpp"
#include "sicm/error.hpp"
#include "sicm/fusion.hpp"
#include "sicm/image_io.hpp"
#include "sicm/latent.hpp"

namespace sicm {

namespace {

constexpr std::uint64_t kBaseStreamSalt = 0xB5AD4ECEDA1CE2A9ULL;
constexpr std::uint64_t kEnhStreamSalt = 0x7F4A7C159E3779B9ULL;

Tensor crop_at(const Tensor& t, int top, int left, int rows, int cols) {
  Tensor out(t.channels(), rows, cols);
  for (int c = 0; c < t.channels(); ++c)
    for (int y = 0; y < rows; ++y)
      for (int x = 0; x < cols; ++x)
        out.at(c, y, x) = t.at(c, top + y, left + x);
  return out;
}

void check_finite(const LossBreakdown& loss, int step) {
  if (!std::isfinite(loss.total) || !std::isfinite(loss.rate_y) ||
      !std::isfinite(loss.rate_z) || !std::isfinite(loss.distortion)) {
    throw TrainingError(
        "non-finite loss at step " + std::to_string(step) +
        ": rate_y=" + format_double(loss.rate_y) +
        " rate_z=" + format_double(loss.rate_z) +
        " distortion=" + format_double(loss.distortion));
  }
}

// Runs one sample; numeric failures (NaN/inf reaching the entropy model or
// the loss) abort training with the step number.
template <typename Fn>
LossBreakdown guarded(int step, Fn&& fn) {
  LossBreakdown loss;
  try {
    loss = fn();
  } catch (const TrainingError&) {
    throw;
  } catch (const Error& e) {
    throw TrainingError("training diverged at step " + std::to_string(step) +
                        ": " + e.what());
  }
  check_finite(loss, step);
  return loss;
}

void zero_grads(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

// Draws batches of random crops; the visiting order is a seeded shuffle
// per epoch so it depends only on the seed.
class CropSampler {
 public:
  CropSampler(const Dataset& data, int crop, std::uint64_t seed)
      : data_(data), crop_(crop), rng_(seed), order_(data.size()) {
    if (data.empty()) throw TrainingError("training dataset is empty");
    for (const TrainingSample& s : data) {
      if (s.image.height() < crop || s.image.width() < crop) {
        throw ConfigError("image " + s.name + " is smaller than the crop size " +
                          std::to_string(crop));
      }
    }
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    cursor_ = order_.size();
  }

  struct Crop {
    Tensor image;
    BinaryMask mask;
  };

  Crop next() {
    if (cursor_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), rng_);
      cursor_ = 0;
    }
    const TrainingSample& s = data_[order_[cursor_++]];
    std::uniform_int_distribution<int> dy(0, s.image.height() - crop_);
    std::uniform_int_distribution<int> dx(0, s.image.width() - crop_);
    const int top = dy(rng_);
    const int left = dx(rng_);
    Crop c{crop_at(s.image, top, left, crop_, crop_), {}};
    if (s.mask.height() > 0) c.mask = crop_mask(s.mask, top, left, crop_, crop_);
    return c;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const Dataset& data_;
  int crop_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_;
};

double learning_rate_at(const TrainConfig& c, int step) {
  if (c.lr_decay_step > 0 && step >= c.lr_decay_step) {
    return c.learning_rate * c.lr_decay;
  }
  return c.learning_rate;
}

void finish_stats(TrainStats* stats, std::vector<TrainLogRow> log) {
  if (stats == nullptr) return;
  const std::size_t window =
      std::clamp<std::size_t>(log.size() / 10, 1, 100);
  auto mean_total = [&log](std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += log[i].loss.total;
    return sum / static_cast<double>(end - begin);
  };
  if (!log.empty()) {
    stats->initial_loss = mean_total(0, std::min(window, log.size()));
    stats->final_loss =
        mean_total(log.size() - std::min(window, log.size()), log.size());
  }
  stats->log = std::move(log);
}

// Streams log rows to an append-only CSV as training proceeds.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path) {
    if (path.empty()) return;
    const bool fresh =
        !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::app);
    if (!out_) throw IoError("cannot open training log " + path.string());
    if (fresh) out_ << "step,rate_y,rate_z,distortion,total\n";
  }
  void write(const TrainLogRow& row) {
    if (!out_.is_open()) return;
    out_ << row.step << ',' << format_double(row.loss.rate_y) << ','
         << format_double(row.loss.rate_z) << ','
         << format_double(row.loss.distortion) << ','
         << format_double(row.loss.total) << '\n';
  }

 private:
  std::ofstream out_;
};

LossBreakdown average(const std::vector<LossBreakdown>& parts) {
  LossBreakdown out;
  for (const LossBreakdown& p : parts) {
    out.rate_y += p.rate_y;
    out.rate_z += p.rate_z;
    out.distortion += p.distortion;
    out.total += p.total;
    out.lambda = p.lambda;
  }
  const double n = static_cast<double>(parts.size());
  out.rate_y /= n;
  out.rate_z /= n;
  out.distortion /= n;
  out.total /= n;
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  model.validate();
  if (lambda_id(model.lambda) == kUnregisteredLambda) {
    throw ConfigError("lambda " + format_double(model.lambda) +
                      " is not in the lambda table");
  }
  if (crop <= 0 || crop % model.downsample_factor != 0) {
    throw ConfigError("crop " + std::to_string(crop) +
                      " must be a positive multiple of the downsample factor " +
                      std::to_string(model.downsample_factor));
  }
  if (batch <= 0) throw ConfigError("batch must be positive");
  if (steps <= 0) throw ConfigError("steps must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(lr_decay > 0.0)) throw ConfigError("lr_decay must be > 0");
  if (lr_decay_step < 0) throw ConfigError("lr_decay_step must be >= 0");
  if (!(grad_clip > 0.0)) throw ConfigError("grad_clip must be > 0");
  if (dilation < 0) throw ConfigError("dilation must be >= 0");
  if (checkpoint_interval < 0) {
    throw ConfigError("checkpoint_interval must be >= 0");
  }
}

TrainConfig TrainConfig::from_kv(const KeyValueConfig& kv) {
  TrainConfig c;
  c.model = ModelConfig::from_kv(kv);
  c.dataset = kv.get_or("dataset", "");
  c.mask_dir = kv.get_or("mask_dir", "");
  c.crop = kv.get_int_or("crop", c.crop);
  c.batch = kv.get_int_or("batch", c.batch);
  c.steps = kv.get_int_or("steps", c.steps);
  c.learning_rate = kv.get_double_or("learning_rate", c.learning_rate);
  c.lr_decay_step = kv.get_int_or("lr_decay_step", c.lr_decay_step);
  c.lr_decay = kv.get_double_or("lr_decay", c.lr_decay);
  c.grad_clip = kv.get_double_or("grad_clip", c.grad_clip);
  c.dilation = kv.get_int_or("dilation", c.dilation);
  c.checkpoint_interval =
      kv.get_int_or("checkpoint_interval", c.checkpoint_interval);
  c.log_path = kv.get_or("log", "");
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  TrainConfig c = from_kv(KeyValueConfig::load(path));
  // Relative paths inside the config are resolved against its directory.
  const auto base = path.parent_path();
  auto resolve = [&base](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(c.dataset);
  resolve(c.mask_dir);
  resolve(c.log_path);
  return c;
}

KeyValueConfig TrainConfig::to_kv() const {
  KeyValueConfig kv = model.to_kv();
  kv.set("dataset", dataset.string());
  if (!mask_dir.empty()) kv.set("mask_dir", mask_dir.string());
  kv.set("crop", std::to_string(crop));
  kv.set("batch", std::to_string(batch));
  kv.set("steps", std::to_string(steps));
  kv.set("learning_rate", format_double(learning_rate));
  kv.set("lr_decay_step", std::to_string(lr_decay_step));
  kv.set("lr_decay", format_double(lr_decay));
  kv.set("grad_clip", format_double(grad_clip));
  kv.set("dilation", std::to_string(dilation));
  kv.set("checkpoint_interval", std::to_string(checkpoint_interval));
  if (!log_path.empty()) kv.set("log", log_path.string());
  return kv;
}

Dataset load_dataset(const TrainConfig& config, bool with_masks) {
  if (config.dataset.empty()) throw ConfigError("dataset path is not set");
  const auto paths = list_images(config.dataset);
  if (paths.empty()) {
    throw TrainingError("no images found in " + config.dataset.string());
  }
  Dataset data;
  data.reserve(paths.size());
  for (const auto& path : paths) {
    TrainingSample s{path.filename().string(), read_image(path), {}};
    if (with_masks) {
      if (!config.mask_dir.empty()) {
        const auto mask_path = mask_path_for(config.mask_dir, path);
        if (!std::filesystem::exists(mask_path)) {
          throw TrainingError("missing mask " + mask_path.string() +
                              " for image " + path.string());
        }
        s.mask = load_mask(mask_path, s.image.height(), s.image.width());
      } else {
        s.mask = edge_mask(s.image, config.dilation);
      }
    }
    data.push_back(std::move(s));
  }
  return data;
}

Dataset make_dataset(const std::vector<Tensor>& images, bool with_masks,
                     int dilation) {
  Dataset data;
  data.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    TrainingSample s{"image" + std::to_string(i), images[i], {}};
    if (with_masks) s.mask = edge_mask(images[i], dilation);
    data.push_back(std::move(s));
  }
  return data;
}

Adam::Adam(std::vector<Parameter*> params, double beta1, double beta2,
           double epsilon)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2),
      epsilon_(epsilon) {
  for (const Parameter* p : params_) {
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

void Adam::step(double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double g = p.grad[j];
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
      p.value[j] -=
          learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + epsilon_);
    }
  }
}

double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double g : p->grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double k = max_norm / norm;
    for (Parameter* p : params)
      for (double& g : p->grad) g *= k;
  }
  return norm;
}

LossBreakdown accumulate_base_gradients(BaseModel& model, const Tensor& x,
                                        const BinaryMask* mask,
                                        double distortion_weight,
                                        double grad_scale,
                                        std::mt19937_64& rng) {
  const double pixels = static_cast<double>(x.height()) * x.width();
  CodecPass pass = train_forward(model.codec, x, rng);
  ConvNet::Cache synth_cache;
  const Tensor x_hat =
      synthesize_raw(model.synthesis, pass.latent_noisy, &synth_cache);
  const double bpp_y = pass.rate_y_bits / pixels;
  const double bpp_z = pass.rate_z_bits / pixels;
  LossBreakdown loss;
  Tensor grad_x_hat;
  if (mask != nullptr) {
    loss = loss_saicm(x, x_hat, *mask, bpp_y, bpp_z, distortion_weight);
    grad_x_hat = masked_mse_grad(x, x_hat, *mask);
  } else {
    loss = loss_lic(x, x_hat, bpp_y, bpp_z, distortion_weight);
    grad_x_hat = mse_grad(x, x_hat);
  }
  grad_x_hat *= distortion_weight * grad_scale;
  const Tensor grad_latent =
      model.synthesis.backward(synth_cache, grad_x_hat, true);
  train_backward(model.codec, pass, grad_latent, grad_scale / pixels);
  return loss;
}

LossBreakdown accumulate_enhancement_gradients(EnhancementModel& model,
                                               const BaseModel& base,
                                               const Tensor& x,
                                               double distortion_weight,
                                               double grad_scale,
                                               std::mt19937_64& rng) {
  const double pixels = static_cast<double>(x.height()) * x.width();
  const int n = base.config.group_count;
  const int m = model.codec.groups();
  // The base layer is what a decoder sees: the coded, rounded latent.
  const LatentGroups y_hat =
      split_groups(quantize_for_coding(analyze_base(x, base)), n);
  CodecPass pass = train_forward(model.codec, x, rng);
  const LatentGroups fused =
      fuse_groups(y_hat, split_groups(pass.latent_noisy, m));
  ConvNet::Cache synth_cache;
  const Tensor x_hat =
      synthesize_raw(model.synthesis, concat_groups(fused), &synth_cache);
  const LossBreakdown loss =
      loss_enh(x, x_hat, pass.rate_y_bits / pixels, pass.rate_z_bits / pixels,
               distortion_weight);
  Tensor grad_x_hat = mse_grad(x, x_hat);
  grad_x_hat *= distortion_weight * grad_scale;
  const Tensor grad_fused =
      model.synthesis.backward(synth_cache, grad_x_hat, true);
  const Tensor grad_latent =
      concat_groups(fuse_groups_backward_enh(split_groups(grad_fused, n), m));
  train_backward(model.codec, pass, grad_latent, grad_scale / pixels);
  return loss;
}

BaseModel train_base(const TrainConfig& config, const Dataset& data,
                     BaseObjective objective, TrainStats* stats,
                     const std::filesystem::path& checkpoint_path) {
  config.validate();
  const bool masked = objective == BaseObjective::kMasked;
  if (masked) {
    for (const TrainingSample& s : data) {
      if (!s.mask.matches(s.image)) {
        throw TrainingError("no usable mask for image " + s.name);
      }
    }
  }
  BaseModel model(config.model);
  model.initialize();
  const auto params = model.parameters();
  Adam adam(params);
  CropSampler sampler(data, config.crop, config.model.seed ^ kBaseStreamSalt);
  LogWriter writer(config.log_path);

  const double batch = static_cast<double>(config.batch);
  const double weight = config.distortion_weight();

  std::vector<TrainLogRow> log;
  log.reserve(config.steps);
  for (int step = 1; step <= config.steps; ++step) {
    zero_grads(params);
    std::vector<LossBreakdown> parts;
    for (int b = 0; b < config.batch; ++b) {
      const auto sample = sampler.next();
      parts.push_back(guarded(step, [&] {
        return accumulate_base_gradients(
            model, sample.image, masked ? &sample.mask : nullptr, weight,
            1.0 / batch, sampler.rng());
      }));
    }
    clip_grad_norm(params, config.grad_clip);
    adam.step(learning_rate_at(config, step));

    TrainLogRow row{step, average(parts)};
    writer.write(row);
    log.push_back(row);
    if (!checkpoint_path.empty() && config.checkpoint_interval > 0 &&
        step % config.checkpoint_interval == 0) {
      save_checkpoint(model, checkpoint_path);
    }
  }
  if (!checkpoint_path.empty()) save_checkpoint(model, checkpoint_path);
  finish_stats(stats, std::move(log));
  return model;
}

EnhancementModel train_enhancement(
    const TrainConfig& config, const Dataset& data, const BaseModel& base,
    TrainStats* stats, const std::filesystem::path& checkpoint_path) {
  config.validate();
  if (!config.model.codec_compatible(base.config)) {
    throw ConfigError(
        "enhancement config (C, n, s) does not match the base checkpoint");
  }
  if (config.model.enh_group_count > base.config.group_count) {
    throw ConfigError("m must not exceed the base group count n");
  }
  EnhancementModel model(config.model);
  model.initialize();
  model.base_hash = model_hash(base);
  const auto params = model.parameters();
  Adam adam(params);
  CropSampler sampler(data, config.crop, config.model.seed ^ kEnhStreamSalt);
  LogWriter writer(config.log_path);

  const double batch = static_cast<double>(config.batch);
  const double weight = config.distortion_weight();

  std::vector<TrainLogRow> log;
  log.reserve(config.steps);
  for (int step = 1; step <= config.steps; ++step) {
    zero_grads(params);
    std::vector<LossBreakdown> parts;
    for (int b = 0; b < config.batch; ++b) {
      const auto sample = sampler.next();
      parts.push_back(guarded(step, [&] {
        return accumulate_enhancement_gradients(
            model, base, sample.image, weight, 1.0 / batch, sampler.rng());
      }));
    }
    clip_grad_norm(params, config.grad_clip);
    adam.step(learning_rate_at(config, step));

    TrainLogRow row{step, average(parts)};
    writer.write(row);
    log.push_back(row);
    if (!checkpoint_path.empty() && config.checkpoint_interval > 0 &&
        step % config.checkpoint_interval == 0) {
      save_checkpoint(model, checkpoint_path);
    }
  }
  if (!checkpoint_path.empty()) save_checkpoint(model, checkpoint_path);
  finish_stats(stats, std::move(log));
  return model;
}

void write_train_log(const std::vector<TrainLogRow>& log,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write training log " + path.string());
  out << "step,rate_y,rate_z,distortion,total\n";
  for (const TrainLogRow& row : log) {
    out << row.step << ',' << format_double(row.loss.rate_y) << ','
        << format_double(row.loss.rate_z) << ','
        << format_double(row.loss.distortion) << ','
        << format_double(row.loss.total) << '\n';
  }
}

}  // namespace sicm
