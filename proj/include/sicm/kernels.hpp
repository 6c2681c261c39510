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

#ifndef SICM_KERNELS_HPP_
#define SICM_KERNELS_HPP_

#include <span>

#include "sicm/tensor.hpp"

// Convolution kernels. The top-level functions are the OpenMP versions used
// by the models; `reference::` holds plain serial loops written straight from
// the definitions, kept for testing and benchmarking.
//
// Every parallel loop partitions over output planes, so each output value is
// produced by exactly one thread in a fixed summation order: results are
// bitwise identical for any thread count.
//
// Weight layouts follow the usual conventions:
//   conv2d:           [out][in][k][k]
//   conv_transpose2d: [in][out][k][k]
namespace sicm::kernels {

struct ConvGeometry {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  int stride = 1;
  int padding = 0;
  int output_padding = 0;  // transposed convolution only
};

int conv_output_size(int in, const ConvGeometry& g);
int conv_transpose_output_size(int in, const ConvGeometry& g);
std::size_t weight_count(const ConvGeometry& g);

Tensor conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvGeometry& g);
Tensor conv2d_backward_input(const Tensor& grad_out,
                             std::span<const double> weight,
                             const ConvGeometry& g, int in_height,
                             int in_width);
// Accumulates into grad_weight / grad_bias.
void conv2d_backward_params(const Tensor& in, const Tensor& grad_out,
                            const ConvGeometry& g,
                            std::span<double> grad_weight,
                            std::span<double> grad_bias);

Tensor conv_transpose2d(const Tensor& in, std::span<const double> weight,
                        std::span<const double> bias, const ConvGeometry& g);
Tensor conv_transpose2d_backward_input(const Tensor& grad_out,
                                       std::span<const double> weight,
                                       const ConvGeometry& g, int in_height,
                                       int in_width);
void conv_transpose2d_backward_params(const Tensor& in, const Tensor& grad_out,
                                      const ConvGeometry& g,
                                      std::span<double> grad_weight,
                                      std::span<double> grad_bias);

namespace reference {

Tensor conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvGeometry& g);
Tensor conv2d_backward_input(const Tensor& grad_out,
                             std::span<const double> weight,
                             const ConvGeometry& g, int in_height,
                             int in_width);
void conv2d_backward_params(const Tensor& in, const Tensor& grad_out,
                            const ConvGeometry& g,
                            std::span<double> grad_weight,
                            std::span<double> grad_bias);

Tensor conv_transpose2d(const Tensor& in, std::span<const double> weight,
                        std::span<const double> bias, const ConvGeometry& g);
Tensor conv_transpose2d_backward_input(const Tensor& grad_out,
                                       std::span<const double> weight,
                                       const ConvGeometry& g, int in_height,
                                       int in_width);
void conv_transpose2d_backward_params(const Tensor& in, const Tensor& grad_out,
                                      const ConvGeometry& g,
                                      std::span<double> grad_weight,
                                      std::span<double> grad_bias);

}  // namespace reference
}  // namespace sicm::kernels

#endif  // SICM_KERNELS_HPP_
