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

#include "sicm/model.hpp"

#include <algorithm>
#include <cmath>

#include "sicm/error.hpp"

namespace sicm {

namespace {

constexpr int kPredictorKernel = 3;

double softplus(double t) { return t > 30.0 ? t : std::log1p(std::exp(t)); }
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::vector<LayerSpec> analysis_layers(const ModelConfig& c, int out) {
  std::vector<LayerSpec> layers;
  int in = 3;
  for (int w : c.hidden_widths) {
    layers.push_back({LayerKind::kConv, in, w, c.kernel, 2});
    in = w;
  }
  layers.push_back({LayerKind::kConv, in, out, c.kernel, 2});
  return layers;
}

std::vector<LayerSpec> synthesis_layers(const ModelConfig& c, int in) {
  std::vector<LayerSpec> layers;
  for (auto it = c.hidden_widths.rbegin(); it != c.hidden_widths.rend(); ++it) {
    layers.push_back({LayerKind::kConvTranspose, in, *it, c.kernel, 2});
    in = *it;
  }
  layers.push_back({LayerKind::kConvTranspose, in, 3, c.kernel, 2});
  return layers;
}

void check_image(const Tensor& x, int factor) {
  if (x.channels() != 3) throw ShapeError("expected a 3-channel image");
  if (x.height() == 0 || x.width() == 0 || x.height() % factor != 0 ||
      x.width() % factor != 0) {
    throw ShapeError("image " + std::to_string(x.width()) + "x" +
                     std::to_string(x.height()) +
                     " is not a multiple of the downsample factor " +
                     std::to_string(factor));
  }
}

Tensor clamp_unit(Tensor t) {
  for (double& v : t.values()) v = std::clamp(v, 0.0, 1.0);
  return t;
}

// Splits a predictor output into (mean, floored scale).
EntropyParams params_from_output(const Tensor& out, int width) {
  EntropyParams p{slice_channels(out, 0, width),
                  slice_channels(out, width, 2 * width)};
  for (double& v : p.scale.values()) v = std::max(softplus(v), kScaleFloor);
  return p;
}

Tensor predictor_input(const Tensor& context, const LatentGroups& previous,
                       int index) {
  std::vector<Tensor> parts;
  parts.reserve(index + 1);
  parts.push_back(context);
  for (int j = 0; j < index; ++j) parts.push_back(previous.groups[j]);
  return concat_channels(parts);
}

}  // namespace

LatentCodec::LatentCodec(const std::string& prefix, const ModelConfig& config,
                         int groups)
    : groups_(groups),
      group_width_(config.group_width()),
      downsample_(config.downsample_factor) {
  config.validate();
  if (groups < 1 || groups > config.group_count) {
    throw ConfigError("latent codec group count out of range");
  }
  const int latent = latent_channels();
  const int hc = config.hyper_channels;
  const int k = config.kernel;
  analysis = ConvNet(prefix + ".analysis", analysis_layers(config, latent));
  hyper_analysis = ConvNet(prefix + ".hyper_analysis",
                           {{LayerKind::kConv, latent, hc, k, 2},
                            {LayerKind::kConv, hc, hc, k, 2}});
  hyper_synthesis =
      ConvNet(prefix + ".hyper_synthesis",
              {{LayerKind::kConvTranspose, hc, hc, k, 2},
               {LayerKind::kConvTranspose, hc, context_channels(), k, 2}});
  for (int i = 0; i < groups; ++i) {
    const int in = context_channels() + i * group_width_;
    predictors.emplace_back(
        prefix + ".predictor" + std::to_string(i),
        std::vector<LayerSpec>{
            {LayerKind::kConv, in, config.predictor_width, kPredictorKernel, 1},
            {LayerKind::kConv, config.predictor_width, 2 * group_width_, 1,
             1}});
  }
  prior_mean = Parameter(prefix + ".prior.mean", {hc}, 0.0);
  prior_log_scale = Parameter(prefix + ".prior.log_scale", {hc}, 0.0);
}

void LatentCodec::initialize(std::mt19937_64& rng) {
  analysis.initialize(rng);
  hyper_analysis.initialize(rng);
  hyper_synthesis.initialize(rng);
  for (ConvNet& p : predictors) p.initialize(rng);
  std::fill(prior_mean.value.begin(), prior_mean.value.end(), 0.0);
  std::fill(prior_log_scale.value.begin(), prior_log_scale.value.end(), 0.0);
}

std::vector<Parameter*> LatentCodec::parameters() {
  std::vector<Parameter*> out;
  auto append = [&out](std::vector<Parameter*> ps) {
    out.insert(out.end(), ps.begin(), ps.end());
  };
  append(analysis.parameters());
  append(hyper_analysis.parameters());
  append(hyper_synthesis.parameters());
  out.push_back(&prior_mean);
  out.push_back(&prior_log_scale);
  for (ConvNet& p : predictors) append(p.parameters());
  return out;
}

std::vector<const Parameter*> LatentCodec::parameters() const {
  std::vector<const Parameter*> out;
  auto append = [&out](std::vector<const Parameter*> ps) {
    out.insert(out.end(), ps.begin(), ps.end());
  };
  append(analysis.parameters());
  append(hyper_analysis.parameters());
  append(hyper_synthesis.parameters());
  out.push_back(&prior_mean);
  out.push_back(&prior_log_scale);
  for (const ConvNet& p : predictors) append(p.parameters());
  return out;
}

BaseModel::BaseModel(const ModelConfig& cfg)
    : config(cfg),
      codec("base", cfg, cfg.group_count),
      synthesis("base.synthesis", synthesis_layers(cfg, cfg.latent_channels)) {}

void BaseModel::initialize() {
  std::mt19937_64 rng(config.seed);
  codec.initialize(rng);
  synthesis.initialize(rng);
}

std::vector<Parameter*> BaseModel::parameters() {
  auto out = codec.parameters();
  auto s = synthesis.parameters();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<const Parameter*> BaseModel::parameters() const {
  auto out = codec.parameters();
  auto s = synthesis.parameters();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

EnhancementModel::EnhancementModel(const ModelConfig& cfg)
    : config(cfg),
      codec("enh", cfg, cfg.enh_group_count),
      synthesis("enh.synthesis", synthesis_layers(cfg, cfg.latent_channels)) {}

void EnhancementModel::initialize() {
  // Offset so base and enhancement with one seed do not share weights.
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  codec.initialize(rng);
  synthesis.initialize(rng);
}

std::vector<Parameter*> EnhancementModel::parameters() {
  auto out = codec.parameters();
  auto s = synthesis.parameters();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<const Parameter*> EnhancementModel::parameters() const {
  auto out = codec.parameters();
  auto s = synthesis.parameters();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

Tensor analyze(const Tensor& x, const LatentCodec& codec) {
  check_image(x, codec.downsample_factor());
  return codec.analysis.forward(x);
}

Tensor analyze_base(const Tensor& x, const BaseModel& model) {
  return analyze(x, model.codec);
}

LatentGroups analyze_enhancement(const Tensor& x,
                                 const EnhancementModel& model) {
  return split_groups(analyze(x, model.codec), model.codec.groups());
}

Tensor hyper_encode(const Tensor& y, const LatentCodec& codec) {
  if (y.channels() != codec.latent_channels()) {
    throw ShapeError("hyper_encode: latent channel mismatch");
  }
  return codec.hyper_analysis.forward(y);
}

Tensor hyper_decode(const Tensor& z_hat, const LatentCodec& codec,
                    int latent_height, int latent_width) {
  const Tensor full = codec.hyper_synthesis.forward(z_hat);
  if (full.height() < latent_height || full.width() < latent_width) {
    throw ShapeError("hyper_decode: hyper latent too small for the latent");
  }
  return crop(full, latent_height, latent_width);
}

EntropyParams hyper_prior_params(const LatentCodec& codec, int height,
                                 int width) {
  const int channels = static_cast<int>(codec.prior_mean.size());
  EntropyParams p{Tensor(channels, height, width),
                  Tensor(channels, height, width)};
  for (int c = 0; c < channels; ++c) {
    const double scale =
        std::max(std::exp(codec.prior_log_scale.value[c]), kScaleFloor);
    for (double& v : p.mean.plane(c)) v = codec.prior_mean.value[c];
    for (double& v : p.scale.plane(c)) v = scale;
  }
  return p;
}

EntropyParams group_entropy_params(int index, const Tensor& context,
                                   const LatentGroups& previous,
                                   const LatentCodec& codec) {
  if (index < 0 || index >= codec.groups()) {
    throw ShapeError("group index out of range");
  }
  if (previous.count() != index) {
    throw ShapeError("group " + std::to_string(index) + " needs exactly " +
                     std::to_string(index) + " previous groups, got " +
                     std::to_string(previous.count()));
  }
  if (context.channels() != codec.context_channels()) {
    throw ShapeError("context channel mismatch");
  }
  const Tensor out =
      codec.predictors[index].forward(predictor_input(context, previous, index));
  return params_from_output(out, codec.group_width());
}

Tensor synthesize_raw(const ConvNet& synthesis, const Tensor& latent,
                      ConvNet::Cache* cache) {
  return synthesis.forward(latent, cache);
}

Tensor synth_machine(const LatentGroups& y_hat, const BaseModel& model) {
  if (y_hat.count() != model.config.group_count) {
    throw ShapeError("synth_machine: expected " +
                     std::to_string(model.config.group_count) + " groups");
  }
  return clamp_unit(model.synthesis.forward(concat_groups(y_hat)));
}

Tensor synth_human(const LatentGroups& fused, const EnhancementModel& model) {
  if (fused.count() != model.config.group_count) {
    throw ShapeError("synth_human: expected " +
                     std::to_string(model.config.group_count) + " groups");
  }
  return clamp_unit(model.synthesis.forward(concat_groups(fused)));
}

std::size_t count_parameters(const EnhancementModel& model) {
  return parameter_count(model.parameters());
}

std::size_t count_parameters(const BaseModel& model) {
  return parameter_count(model.parameters());
}

CodecPass train_forward(const LatentCodec& codec, const Tensor& x,
                        std::mt19937_64& rng) {
  check_image(x, codec.downsample_factor());
  CodecPass pass;
  pass.latent = codec.analysis.forward(x, &pass.analysis_cache);
  const Tensor z = codec.hyper_analysis.forward(pass.latent,
                                                &pass.hyper_analysis_cache);
  pass.z_noisy = quantize(z, QuantMode::kTrain, &rng);
  pass.rate_z_bits = estimated_rate(
      pass.z_noisy,
      hyper_prior_params(codec, pass.z_noisy.height(), pass.z_noisy.width()),
      &pass.z_rate_grads);
  pass.context_full = codec.hyper_synthesis.forward(
      pass.z_noisy, &pass.hyper_synthesis_cache);
  const Tensor context =
      crop(pass.context_full, pass.latent.height(), pass.latent.width());

  pass.latent_noisy = quantize(pass.latent, QuantMode::kTrain, &rng);
  const LatentGroups rounded =
      split_groups(quantize_for_coding(pass.latent), codec.groups());
  const LatentGroups noisy = split_groups(pass.latent_noisy, codec.groups());

  const int g = codec.group_width();
  pass.predictor_caches.resize(codec.groups());
  for (int i = 0; i < codec.groups(); ++i) {
    const Tensor out = codec.predictors[i].forward(
        predictor_input(context, rounded, i), &pass.predictor_caches[i]);
    pass.params.push_back(params_from_output(out, g));
    pass.predictor_outputs.push_back(out);
    RateGradients grads;
    pass.rate_y_bits += estimated_rate(noisy.groups[i], pass.params[i], &grads);
    pass.rate_grads.push_back(std::move(grads));
  }
  return pass;
}

void train_backward(LatentCodec& codec, const CodecPass& pass,
                    const Tensor& grad_latent, double rate_weight) {
  const int g = codec.group_width();
  const int groups = codec.groups();
  const int h = pass.latent.height();
  const int w = pass.latent.width();

  Tensor grad_y(pass.latent.channels(), h, w);
  if (!grad_latent.empty()) grad_y += grad_latent;
  for (int i = 0; i < groups; ++i) {
    const Tensor& gs = pass.rate_grads[i].symbols;
    auto dst = grad_y.values().subspan(i * gs.size(), gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) dst[j] += rate_weight * gs[j];
  }

  Tensor grad_context_full(pass.context_full.channels(),
                           pass.context_full.height(),
                           pass.context_full.width());
  for (int i = 0; i < groups; ++i) {
    const Tensor& out = pass.predictor_outputs[i];
    const RateGradients& rg = pass.rate_grads[i];
    Tensor grad_out(out.channels(), h, w);
    for (int c = 0; c < g; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          grad_out.at(c, y, x) = rate_weight * rg.mean.at(c, y, x);
          const double raw = out.at(g + c, y, x);
          const double dscale = rate_weight * rg.scale.at(c, y, x);
          // Lower bound passes gradients that would raise a clamped scale.
          const bool pass_through = softplus(raw) >= kScaleFloor || dscale < 0.0;
          grad_out.at(g + c, y, x) = pass_through ? dscale * sigmoid(raw) : 0.0;
        }
    const Tensor grad_in =
        codec.predictors[i].backward(pass.predictor_caches[i], grad_out, true);
    for (int c = 0; c < codec.context_channels(); ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          grad_context_full.at(c, y, x) += grad_in.at(c, y, x);
  }

  Tensor grad_z = codec.hyper_synthesis.backward(pass.hyper_synthesis_cache,
                                                 grad_context_full, true);
  const RateGradients& zg = pass.z_rate_grads;
  for (int c = 0; c < grad_z.channels(); ++c) {
    const double scale = std::exp(codec.prior_log_scale.value[c]);
    double dmean = 0.0, dscale = 0.0;
    for (int y = 0; y < grad_z.height(); ++y)
      for (int x = 0; x < grad_z.width(); ++x) {
        grad_z.at(c, y, x) += rate_weight * zg.symbols.at(c, y, x);
        dmean += zg.mean.at(c, y, x);
        dscale += zg.scale.at(c, y, x);
      }
    dmean *= rate_weight;
    dscale *= rate_weight;
    codec.prior_mean.grad[c] += dmean;
    if (scale >= kScaleFloor || dscale < 0.0) {
      codec.prior_log_scale.grad[c] += dscale * scale;
    }
  }

  grad_y += codec.hyper_analysis.backward(pass.hyper_analysis_cache, grad_z,
                                          true);
  codec.analysis.backward(pass.analysis_cache, grad_y, false);
}

}  // namespace sicm
