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

// Serial reference kernels: one output element at a time, straight from the
// index definitions. Slow, obviously correct.

#include "sicm/error.hpp"
#include "sicm/kernels.hpp"

namespace sicm::kernels::reference {

namespace {

std::size_t widx(int a, int b, int ky, int kx, int dim_b, int k) {
  return ((static_cast<std::size_t>(a) * dim_b + b) * k + ky) * k + kx;
}

}  // namespace

Tensor conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvGeometry& g) {
  if (in.channels() != g.in_channels) throw ShapeError("conv2d: channels");
  const int oh = conv_output_size(in.height(), g);
  const int ow = conv_output_size(in.width(), g);
  Tensor out(g.out_channels, oh, ow);
  for (int o = 0; o < g.out_channels; ++o)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias[o];
        for (int i = 0; i < g.in_channels; ++i)
          for (int ky = 0; ky < g.kernel; ++ky)
            for (int kx = 0; kx < g.kernel; ++kx) {
              const int iy = oy * g.stride - g.padding + ky;
              const int ix = ox * g.stride - g.padding + kx;
              if (iy < 0 || iy >= in.height() || ix < 0 || ix >= in.width())
                continue;
              acc += weight[widx(o, i, ky, kx, g.in_channels, g.kernel)] *
                     in.at(i, iy, ix);
            }
        out.at(o, oy, ox) = acc;
      }
  return out;
}

Tensor conv2d_backward_input(const Tensor& grad_out,
                             std::span<const double> weight,
                             const ConvGeometry& g, int in_height,
                             int in_width) {
  Tensor grad_in(g.in_channels, in_height, in_width);
  for (int i = 0; i < g.in_channels; ++i)
    for (int iy = 0; iy < in_height; ++iy)
      for (int ix = 0; ix < in_width; ++ix) {
        double acc = 0.0;
        for (int o = 0; o < g.out_channels; ++o)
          for (int ky = 0; ky < g.kernel; ++ky)
            for (int kx = 0; kx < g.kernel; ++kx) {
              const int ty = iy + g.padding - ky;
              const int tx = ix + g.padding - kx;
              if (ty < 0 || tx < 0 || ty % g.stride || tx % g.stride) continue;
              const int oy = ty / g.stride;
              const int ox = tx / g.stride;
              if (oy >= grad_out.height() || ox >= grad_out.width()) continue;
              acc += weight[widx(o, i, ky, kx, g.in_channels, g.kernel)] *
                     grad_out.at(o, oy, ox);
            }
        grad_in.at(i, iy, ix) = acc;
      }
  return grad_in;
}

void conv2d_backward_params(const Tensor& in, const Tensor& grad_out,
                            const ConvGeometry& g,
                            std::span<double> grad_weight,
                            std::span<double> grad_bias) {
  for (int o = 0; o < g.out_channels; ++o) {
    for (int i = 0; i < g.in_channels; ++i)
      for (int ky = 0; ky < g.kernel; ++ky)
        for (int kx = 0; kx < g.kernel; ++kx) {
          double acc = 0.0;
          for (int oy = 0; oy < grad_out.height(); ++oy)
            for (int ox = 0; ox < grad_out.width(); ++ox) {
              const int iy = oy * g.stride - g.padding + ky;
              const int ix = ox * g.stride - g.padding + kx;
              if (iy < 0 || iy >= in.height() || ix < 0 || ix >= in.width())
                continue;
              acc += grad_out.at(o, oy, ox) * in.at(i, iy, ix);
            }
          grad_weight[widx(o, i, ky, kx, g.in_channels, g.kernel)] += acc;
        }
    double b = 0.0;
    for (double v : grad_out.plane(o)) b += v;
    grad_bias[o] += b;
  }
}

Tensor conv_transpose2d(const Tensor& in, std::span<const double> weight,
                        std::span<const double> bias, const ConvGeometry& g) {
  if (in.channels() != g.in_channels) {
    throw ShapeError("conv_transpose2d: channels");
  }
  const int oh = conv_transpose_output_size(in.height(), g);
  const int ow = conv_transpose_output_size(in.width(), g);
  Tensor out(g.out_channels, oh, ow);
  for (int o = 0; o < g.out_channels; ++o)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias[o];
        for (int i = 0; i < g.in_channels; ++i)
          for (int ky = 0; ky < g.kernel; ++ky)
            for (int kx = 0; kx < g.kernel; ++kx) {
              const int ty = oy + g.padding - ky;
              const int tx = ox + g.padding - kx;
              if (ty < 0 || tx < 0 || ty % g.stride || tx % g.stride) continue;
              const int iy = ty / g.stride;
              const int ix = tx / g.stride;
              if (iy >= in.height() || ix >= in.width()) continue;
              acc += weight[widx(i, o, ky, kx, g.out_channels, g.kernel)] *
                     in.at(i, iy, ix);
            }
        out.at(o, oy, ox) = acc;
      }
  return out;
}

Tensor conv_transpose2d_backward_input(const Tensor& grad_out,
                                       std::span<const double> weight,
                                       const ConvGeometry& g, int in_height,
                                       int in_width) {
  Tensor grad_in(g.in_channels, in_height, in_width);
  for (int i = 0; i < g.in_channels; ++i)
    for (int iy = 0; iy < in_height; ++iy)
      for (int ix = 0; ix < in_width; ++ix) {
        double acc = 0.0;
        for (int o = 0; o < g.out_channels; ++o)
          for (int ky = 0; ky < g.kernel; ++ky)
            for (int kx = 0; kx < g.kernel; ++kx) {
              const int oy = iy * g.stride - g.padding + ky;
              const int ox = ix * g.stride - g.padding + kx;
              if (oy < 0 || oy >= grad_out.height() || ox < 0 ||
                  ox >= grad_out.width())
                continue;
              acc += weight[widx(i, o, ky, kx, g.out_channels, g.kernel)] *
                     grad_out.at(o, oy, ox);
            }
        grad_in.at(i, iy, ix) = acc;
      }
  return grad_in;
}

void conv_transpose2d_backward_params(const Tensor& in, const Tensor& grad_out,
                                      const ConvGeometry& g,
                                      std::span<double> grad_weight,
                                      std::span<double> grad_bias) {
  for (int i = 0; i < g.in_channels; ++i)
    for (int o = 0; o < g.out_channels; ++o)
      for (int ky = 0; ky < g.kernel; ++ky)
        for (int kx = 0; kx < g.kernel; ++kx) {
          double acc = 0.0;
          for (int iy = 0; iy < in.height(); ++iy)
            for (int ix = 0; ix < in.width(); ++ix) {
              const int oy = iy * g.stride - g.padding + ky;
              const int ox = ix * g.stride - g.padding + kx;
              if (oy < 0 || oy >= grad_out.height() || ox < 0 ||
                  ox >= grad_out.width())
                continue;
              acc += in.at(i, iy, ix) * grad_out.at(o, oy, ox);
            }
          grad_weight[widx(i, o, ky, kx, g.out_channels, g.kernel)] += acc;
        }
  for (int o = 0; o < g.out_channels; ++o) {
    double b = 0.0;
    for (double v : grad_out.plane(o)) b += v;
    grad_bias[o] += b;
  }
}

}  // namespace sicm::kernels::reference
