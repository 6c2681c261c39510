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

#include "sicm/layers.hpp"

#include <cmath>
#include <utility>

#include "sicm/error.hpp"

namespace sicm {

Parameter::Parameter(std::string name_in, std::vector<int> dims_in,
                     double fill)
    : name(std::move(name_in)), dims(std::move(dims_in)) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  value.assign(n, fill);
  grad.assign(n, 0.0);
}

void Parameter::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

ConvNet::ConvNet(std::string name, std::vector<LayerSpec> layers)
    : name_(std::move(name)), layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("ConvNet needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerSpec& s = layers_[l];
    if (l > 0 && s.in_channels != layers_[l - 1].out_channels) {
      throw ConfigError(name_ + ": layer channel chain broken");
    }
    if (s.kernel % 2 == 0) throw ConfigError(name_ + ": kernel must be odd");
    const std::string prefix = name_ + "." + std::to_string(l);
    const std::vector<int> dims =
        s.kind == LayerKind::kConv
            ? std::vector<int>{s.out_channels, s.in_channels, s.kernel,
                               s.kernel}
            : std::vector<int>{s.in_channels, s.out_channels, s.kernel,
                               s.kernel};
    weights_.emplace_back(prefix + ".weight", dims);
    biases_.emplace_back(prefix + ".bias", std::vector<int>{s.out_channels});
  }
}

kernels::ConvGeometry ConvNet::geometry(std::size_t l) const {
  const LayerSpec& s = layers_[l];
  kernels::ConvGeometry g;
  g.in_channels = s.in_channels;
  g.out_channels = s.out_channels;
  g.kernel = s.kernel;
  g.stride = s.stride;
  g.padding = s.kernel / 2;
  g.output_padding = s.kind == LayerKind::kConvTranspose ? s.stride - 1 : 0;
  return g;
}

Tensor ConvNet::forward(const Tensor& x, Cache* cache) const {
  if (x.channels() != in_channels()) {
    throw ShapeError(name_ + ": expected " + std::to_string(in_channels()) +
                     " input channels, got " + std::to_string(x.channels()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->inputs.push_back(x);
  }
  Tensor h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto g = geometry(l);
    h = layers_[l].kind == LayerKind::kConv
            ? kernels::conv2d(h, weights_[l].value, biases_[l].value, g)
            : kernels::conv_transpose2d(h, weights_[l].value,
                                        biases_[l].value, g);
    if (l + 1 < layers_.size()) {
      for (double& v : h.values()) v = v > 0.0 ? v : kLeakySlope * v;
      if (cache) cache->inputs.push_back(h);
    }
  }
  return h;
}

Tensor ConvNet::backward(const Cache& cache, Tensor grad,
                         bool need_input_grad) {
  if (cache.inputs.size() != layers_.size()) {
    throw Error(name_ + ": backward without matching forward cache");
  }
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Tensor& input = cache.inputs[l];
    if (l + 1 < layers_.size()) {
      const Tensor& activated = cache.inputs[l + 1];
      for (std::size_t j = 0; j < grad.size(); ++j) {
        if (!(activated[j] > 0.0)) grad[j] *= kLeakySlope;
      }
    }
    const auto g = geometry(l);
    const bool conv = layers_[l].kind == LayerKind::kConv;
    if (conv) {
      kernels::conv2d_backward_params(input, grad, g, weights_[l].grad,
                                      biases_[l].grad);
    } else {
      kernels::conv_transpose2d_backward_params(input, grad, g,
                                                weights_[l].grad,
                                                biases_[l].grad);
    }
    if (l == 0 && !need_input_grad) return Tensor();
    grad = conv ? kernels::conv2d_backward_input(grad, weights_[l].value, g,
                                                 input.height(), input.width())
                : kernels::conv_transpose2d_backward_input(
                      grad, weights_[l].value, g, input.height(),
                      input.width());
  }
  return grad;
}

void ConvNet::initialize(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerSpec& s = layers_[l];
    double fan_in = static_cast<double>(s.in_channels) * s.kernel * s.kernel;
    if (s.kind == LayerKind::kConvTranspose) {
      fan_in /= static_cast<double>(s.stride) * s.stride;
    }
    const double gain =
        l + 1 < layers_.size() ? 2.0 / (1.0 + kLeakySlope * kLeakySlope) : 1.0;
    const double bound = std::sqrt(3.0 * gain / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : weights_[l].value) w = dist(rng);
    std::fill(biases_[l].value.begin(), biases_[l].value.end(), 0.0);
  }
}

std::vector<Parameter*> ConvNet::parameters() {
  std::vector<Parameter*> out;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

std::vector<const Parameter*> ConvNet::parameters() const {
  std::vector<const Parameter*> out;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

std::size_t parameter_count(const std::vector<const Parameter*>& params) {
  std::size_t n = 0;
  for (const Parameter* p : params) n += p->size();
  return n;
}

}  // namespace sicm
