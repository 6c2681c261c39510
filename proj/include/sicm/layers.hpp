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

#ifndef SICM_LAYERS_HPP_
#define SICM_LAYERS_HPP_

#include <random>
#include <string>
#include <vector>

#include "sicm/kernels.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

// Named trainable array with its gradient accumulator.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, std::vector<int> dims, double fill = 0.0);

  std::size_t size() const { return value.size(); }
  void zero_grad();

  std::string name;
  std::vector<int> dims;
  std::vector<double> value;
  std::vector<double> grad;
};

enum class LayerKind { kConv, kConvTranspose };

struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 5;
  int stride = 1;
};

// A chain of (transposed) convolutions with leaky-ReLU between layers and a
// linear final layer. "Same" padding: stride-s layers scale the spatial size
// by exactly 1/s (conv, for multiples of s) or s (transposed).
class ConvNet {
 public:
  // Per-layer inputs recorded by forward(); inputs[l + 1] is the activated
  // output of layer l.
  struct Cache {
    std::vector<Tensor> inputs;
  };

  static constexpr double kLeakySlope = 0.01;

  ConvNet() = default;
  ConvNet(std::string name, std::vector<LayerSpec> layers);

  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;

  // Accumulates parameter gradients for the pass recorded in `cache` and
  // returns d(loss)/d(input), or an empty tensor when !need_input_grad.
  Tensor backward(const Cache& cache, Tensor grad_out, bool need_input_grad);

  void initialize(std::mt19937_64& rng);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  int in_channels() const { return layers_.front().in_channels; }
  int out_channels() const { return layers_.back().out_channels; }
  const std::vector<LayerSpec>& layers() const { return layers_; }

 private:
  kernels::ConvGeometry geometry(std::size_t l) const;

  std::string name_;
  std::vector<LayerSpec> layers_;
  std::vector<Parameter> weights_;
  std::vector<Parameter> biases_;
};

std::size_t parameter_count(const std::vector<const Parameter*>& params);

}  // namespace sicm

#endif  // SICM_LAYERS_HPP_
