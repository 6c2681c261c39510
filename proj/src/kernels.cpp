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

#include "sicm/kernels.hpp"

#include <algorithm>

#include "sicm/error.hpp"

namespace sicm::kernels {

namespace {

// Below this many multiply-adds the fork/join cost dominates.
constexpr std::size_t kParallelThreshold = 1 << 15;

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

// Indices t in [lo, hi] with t * stride + offset inside [0, target).
struct Span1D {
  int lo;
  int hi;
};
Span1D valid_range(int count, int stride, int offset, int target) {
  return {std::max(0, ceil_div(-offset, stride)),
          std::min(count - 1, floor_div(target - 1 - offset, stride))};
}

void check_geometry(const ConvGeometry& g) {
  if (g.in_channels <= 0 || g.out_channels <= 0 || g.kernel <= 0 ||
      g.stride <= 0 || g.padding < 0 || g.output_padding < 0) {
    throw ConfigError("invalid convolution geometry");
  }
}

void check_params(const ConvGeometry& g, std::size_t weights,
                  std::size_t biases) {
  check_geometry(g);
  if (weights != weight_count(g) ||
      biases != static_cast<std::size_t>(g.out_channels)) {
    throw ShapeError("convolution parameter size mismatch");
  }
}

}  // namespace

int conv_output_size(int in, const ConvGeometry& g) {
  return (in + 2 * g.padding - g.kernel) / g.stride + 1;
}

int conv_transpose_output_size(int in, const ConvGeometry& g) {
  return (in - 1) * g.stride - 2 * g.padding + g.kernel + g.output_padding;
}

std::size_t weight_count(const ConvGeometry& g) {
  return static_cast<std::size_t>(g.in_channels) * g.out_channels * g.kernel *
         g.kernel;
}

Tensor conv2d(const Tensor& in, std::span<const double> weight,
              std::span<const double> bias, const ConvGeometry& g) {
  check_params(g, weight.size(), bias.size());
  if (in.channels() != g.in_channels) throw ShapeError("conv2d: channels");
  const int ih = in.height(), iw = in.width();
  const int oh = conv_output_size(ih, g), ow = conv_output_size(iw, g);
  const int k = g.kernel, s = g.stride;
  Tensor out(g.out_channels, oh, ow);
  const std::size_t work = out.size() * g.in_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int o = 0; o < g.out_channels; ++o) {
    double* dst = out.plane(o).data();
    std::fill(dst, dst + out.plane_size(), bias[o]);
    for (int i = 0; i < g.in_channels; ++i) {
      const double* src = in.plane(i).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(oh, s, ky - g.padding, ih);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(ow, s, kx - g.padding, iw);
          const double wv =
              weight[((static_cast<std::size_t>(o) * g.in_channels + i) * k +
                      ky) * k + kx];
          for (int oy = ry.lo; oy <= ry.hi; ++oy) {
            const double* row = src + (oy * s + ky - g.padding) * iw +
                                (kx - g.padding);
            double* orow = dst + oy * ow;
            for (int ox = rx.lo; ox <= rx.hi; ++ox) orow[ox] += wv * row[ox * s];
          }
        }
      }
    }
  }
  return out;
}

Tensor conv2d_backward_input(const Tensor& grad_out,
                             std::span<const double> weight,
                             const ConvGeometry& g, int in_height,
                             int in_width) {
  check_geometry(g);
  if (grad_out.channels() != g.out_channels) {
    throw ShapeError("conv2d backward: channels");
  }
  const int oh = grad_out.height(), ow = grad_out.width();
  const int k = g.kernel, s = g.stride;
  Tensor grad_in(g.in_channels, in_height, in_width);
  const std::size_t work = grad_out.size() * g.in_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int i = 0; i < g.in_channels; ++i) {
    double* dst = grad_in.plane(i).data();
    for (int o = 0; o < g.out_channels; ++o) {
      const double* src = grad_out.plane(o).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(oh, s, ky - g.padding, in_height);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(ow, s, kx - g.padding, in_width);
          const double wv =
              weight[((static_cast<std::size_t>(o) * g.in_channels + i) * k +
                      ky) * k + kx];
          for (int oy = ry.lo; oy <= ry.hi; ++oy) {
            double* row = dst + (oy * s + ky - g.padding) * in_width +
                          (kx - g.padding);
            const double* grow = src + oy * ow;
            for (int ox = rx.lo; ox <= rx.hi; ++ox) row[ox * s] += wv * grow[ox];
          }
        }
      }
    }
  }
  return grad_in;
}

void conv2d_backward_params(const Tensor& in, const Tensor& grad_out,
                            const ConvGeometry& g,
                            std::span<double> grad_weight,
                            std::span<double> grad_bias) {
  check_params(g, grad_weight.size(), grad_bias.size());
  const int ih = in.height(), iw = in.width();
  const int oh = grad_out.height(), ow = grad_out.width();
  const int k = g.kernel, s = g.stride;
  const std::size_t work = grad_out.size() * g.in_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int o = 0; o < g.out_channels; ++o) {
    const double* gsrc = grad_out.plane(o).data();
    for (int i = 0; i < g.in_channels; ++i) {
      const double* src = in.plane(i).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(oh, s, ky - g.padding, ih);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(ow, s, kx - g.padding, iw);
          double acc = 0.0;
          for (int oy = ry.lo; oy <= ry.hi; ++oy) {
            const double* row = src + (oy * s + ky - g.padding) * iw +
                                (kx - g.padding);
            const double* grow = gsrc + oy * ow;
            for (int ox = rx.lo; ox <= rx.hi; ++ox) acc += grow[ox] * row[ox * s];
          }
          grad_weight[((static_cast<std::size_t>(o) * g.in_channels + i) * k +
                       ky) * k + kx] += acc;
        }
      }
    }
    double b = 0.0;
    for (int j = 0; j < oh * ow; ++j) b += gsrc[j];
    grad_bias[o] += b;
  }
}

Tensor conv_transpose2d(const Tensor& in, std::span<const double> weight,
                        std::span<const double> bias, const ConvGeometry& g) {
  check_params(g, weight.size(), bias.size());
  if (in.channels() != g.in_channels) {
    throw ShapeError("conv_transpose2d: channels");
  }
  const int ih = in.height(), iw = in.width();
  const int oh = conv_transpose_output_size(ih, g);
  const int ow = conv_transpose_output_size(iw, g);
  const int k = g.kernel, s = g.stride;
  Tensor out(g.out_channels, oh, ow);
  const std::size_t work = in.size() * g.out_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int o = 0; o < g.out_channels; ++o) {
    double* dst = out.plane(o).data();
    std::fill(dst, dst + out.plane_size(), bias[o]);
    for (int i = 0; i < g.in_channels; ++i) {
      const double* src = in.plane(i).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(ih, s, ky - g.padding, oh);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(iw, s, kx - g.padding, ow);
          const double wv =
              weight[((static_cast<std::size_t>(i) * g.out_channels + o) * k +
                      ky) * k + kx];
          for (int iy = ry.lo; iy <= ry.hi; ++iy) {
            double* orow = dst + (iy * s + ky - g.padding) * ow +
                           (kx - g.padding);
            const double* row = src + iy * iw;
            for (int ix = rx.lo; ix <= rx.hi; ++ix) orow[ix * s] += wv * row[ix];
          }
        }
      }
    }
  }
  return out;
}

Tensor conv_transpose2d_backward_input(const Tensor& grad_out,
                                       std::span<const double> weight,
                                       const ConvGeometry& g, int in_height,
                                       int in_width) {
  check_geometry(g);
  if (grad_out.channels() != g.out_channels) {
    throw ShapeError("conv_transpose2d backward: channels");
  }
  const int oh = grad_out.height(), ow = grad_out.width();
  const int k = g.kernel, s = g.stride;
  Tensor grad_in(g.in_channels, in_height, in_width);
  const std::size_t work = grad_in.size() * g.out_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int i = 0; i < g.in_channels; ++i) {
    double* dst = grad_in.plane(i).data();
    for (int o = 0; o < g.out_channels; ++o) {
      const double* src = grad_out.plane(o).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(in_height, s, ky - g.padding, oh);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(in_width, s, kx - g.padding, ow);
          const double wv =
              weight[((static_cast<std::size_t>(i) * g.out_channels + o) * k +
                      ky) * k + kx];
          for (int iy = ry.lo; iy <= ry.hi; ++iy) {
            const double* grow = src + (iy * s + ky - g.padding) * ow +
                                 (kx - g.padding);
            double* row = dst + iy * in_width;
            for (int ix = rx.lo; ix <= rx.hi; ++ix) row[ix] += wv * grow[ix * s];
          }
        }
      }
    }
  }
  return grad_in;
}

void conv_transpose2d_backward_params(const Tensor& in, const Tensor& grad_out,
                                      const ConvGeometry& g,
                                      std::span<double> grad_weight,
                                      std::span<double> grad_bias) {
  check_params(g, grad_weight.size(), grad_bias.size());
  const int ih = in.height(), iw = in.width();
  const int oh = grad_out.height(), ow = grad_out.width();
  const int k = g.kernel, s = g.stride;
  const std::size_t work = in.size() * g.out_channels * k * k;

#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int o = 0; o < g.out_channels; ++o) {
    const double* gsrc = grad_out.plane(o).data();
    for (int i = 0; i < g.in_channels; ++i) {
      const double* src = in.plane(i).data();
      for (int ky = 0; ky < k; ++ky) {
        const Span1D ry = valid_range(ih, s, ky - g.padding, oh);
        for (int kx = 0; kx < k; ++kx) {
          const Span1D rx = valid_range(iw, s, kx - g.padding, ow);
          double acc = 0.0;
          for (int iy = ry.lo; iy <= ry.hi; ++iy) {
            const double* grow = gsrc + (iy * s + ky - g.padding) * ow +
                                 (kx - g.padding);
            const double* row = src + iy * iw;
            for (int ix = rx.lo; ix <= rx.hi; ++ix) acc += row[ix] * grow[ix * s];
          }
          grad_weight[((static_cast<std::size_t>(i) * g.out_channels + o) * k +
                       ky) * k + kx] += acc;
        }
      }
    }
    double b = 0.0;
    for (int j = 0; j < oh * ow; ++j) b += gsrc[j];
    grad_bias[o] += b;
  }
}

}  // namespace sicm::kernels
