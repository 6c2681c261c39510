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

// Compares the OpenMP convolution kernels against the serial reference
// loops on layer shapes taken from the toy and full-size models.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sicm/kernels.hpp"
#include "sicm/tensor.hpp"

namespace sicm::kernels {
namespace {

struct Case {
  ConvGeometry g;
  Tensor in;
  std::vector<double> weight;
  std::vector<double> bias;
};

// args: channels in, channels out, spatial size, stride.
Case make_case(const benchmark::State& state, bool transposed) {
  Case c;
  c.g.in_channels = static_cast<int>(state.range(0));
  c.g.out_channels = static_cast<int>(state.range(1));
  c.g.kernel = 5;
  c.g.stride = static_cast<int>(state.range(3));
  c.g.padding = 2;
  c.g.output_padding = transposed ? c.g.stride - 1 : 0;
  const int size = static_cast<int>(state.range(2));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  c.in = Tensor(c.g.in_channels, size, size);
  for (double& v : c.in.values()) v = dist(rng);
  c.weight.resize(weight_count(c.g));
  for (double& v : c.weight) v = dist(rng);
  c.bias.assign(c.g.out_channels, 0.1);
  return c;
}

template <auto Fn>
void BM_Conv(benchmark::State& state) {
  const Case c = make_case(state, false);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(c.in, c.weight, c.bias, c.g));
}

template <auto Fn>
void BM_ConvTranspose(benchmark::State& state) {
  const Case c = make_case(state, true);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(c.in, c.weight, c.bias, c.g));
}

template <auto Fn>
void BM_ConvBackwardInput(benchmark::State& state) {
  const Case c = make_case(state, false);
  const Tensor out = conv2d(c.in, c.weight, c.bias, c.g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Fn(out, c.weight, c.g, c.in.height(), c.in.width()));
  }
}

template <auto Fn>
void BM_ConvBackwardParams(benchmark::State& state) {
  const Case c = make_case(state, false);
  const Tensor out = conv2d(c.in, c.weight, c.bias, c.g);
  std::vector<double> gw(c.weight.size()), gb(c.bias.size());
  for (auto _ : state) {
    Fn(c.in, out, c.g, gw, gb);
    benchmark::DoNotOptimize(gw.data());
  }
}

void Shapes(benchmark::internal::Benchmark* b) {
  b->Args({3, 16, 32, 2})->Args({16, 24, 16, 2})->Args({32, 40, 8, 1})
      ->Args({64, 64, 32, 2});
}

BENCHMARK(BM_Conv<&conv2d>)->Apply(Shapes);
BENCHMARK(BM_Conv<&reference::conv2d>)->Apply(Shapes);
BENCHMARK(BM_ConvTranspose<&conv_transpose2d>)->Apply(Shapes);
BENCHMARK(BM_ConvTranspose<&reference::conv_transpose2d>)->Apply(Shapes);
BENCHMARK(BM_ConvBackwardInput<&conv2d_backward_input>)->Apply(Shapes);
BENCHMARK(BM_ConvBackwardInput<&reference::conv2d_backward_input>)->Apply(Shapes);
BENCHMARK(BM_ConvBackwardParams<&conv2d_backward_params>)->Apply(Shapes);
BENCHMARK(BM_ConvBackwardParams<&reference::conv2d_backward_params>)->Apply(Shapes);

}  // namespace
}  // namespace sicm::kernels

BENCHMARK_MAIN();
