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

#include <cmath>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "sicm/error.hpp"
#include "test_util.hpp"

namespace sicm::kernels {
namespace {

using sicm::testing::random_tensor;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  const Tensor t = random_tensor(1, 1, static_cast<int>(n), seed);
  return {t.values().begin(), t.values().end()};
}

void expect_close(std::span<const double> a, std::span<const double> b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-11 * (1.0 + std::abs(b[i]))) << "at " << i;
  }
}

// (in_channels, out_channels, kernel, stride, height, width)
using Case = std::tuple<int, int, int, int, int, int>;

class KernelParity : public ::testing::TestWithParam<Case> {
 protected:
  ConvGeometry geometry(bool transpose) const {
    const auto [ci, co, k, s, h, w] = GetParam();
    return {ci, co, k, s, k / 2, transpose ? s - 1 : 0};
  }
};

TEST_P(KernelParity, ConvMatchesReference) {
  const auto [ci, co, k, s, h, w] = GetParam();
  const ConvGeometry g = geometry(false);
  const Tensor in = random_tensor(ci, h, w, 1);
  const auto weight = random_values(weight_count(g), 2);
  const auto bias = random_values(co, 3);
  const Tensor out = conv2d(in, weight, bias, g);
  const Tensor ref = reference::conv2d(in, weight, bias, g);
  ASSERT_TRUE(out.same_shape(ref));
  expect_close(out.values(), ref.values());

  const Tensor grad_out = random_tensor(co, out.height(), out.width(), 4);
  expect_close(conv2d_backward_input(grad_out, weight, g, h, w).values(),
               reference::conv2d_backward_input(grad_out, weight, g, h, w)
                   .values());
  std::vector<double> gw(weight.size()), gb(co), rgw(weight.size()), rgb(co);
  conv2d_backward_params(in, grad_out, g, gw, gb);
  reference::conv2d_backward_params(in, grad_out, g, rgw, rgb);
  expect_close(gw, rgw);
  expect_close(gb, rgb);
}

TEST_P(KernelParity, TransposedConvMatchesReference) {
  const auto [ci, co, k, s, h, w] = GetParam();
  const ConvGeometry g = geometry(true);
  const Tensor in = random_tensor(ci, h, w, 5);
  const auto weight = random_values(weight_count(g), 6);
  const auto bias = random_values(co, 7);
  const Tensor out = conv_transpose2d(in, weight, bias, g);
  const Tensor ref = reference::conv_transpose2d(in, weight, bias, g);
  ASSERT_TRUE(out.same_shape(ref));
  EXPECT_EQ(out.height(), h * s);
  expect_close(out.values(), ref.values());

  const Tensor grad_out = random_tensor(co, out.height(), out.width(), 8);
  expect_close(
      conv_transpose2d_backward_input(grad_out, weight, g, h, w).values(),
      reference::conv_transpose2d_backward_input(grad_out, weight, g, h, w)
          .values());
  std::vector<double> gw(weight.size()), gb(co), rgw(weight.size()), rgb(co);
  conv_transpose2d_backward_params(in, grad_out, g, gw, gb);
  reference::conv_transpose2d_backward_params(in, grad_out, g, rgw, rgb);
  expect_close(gw, rgw);
  expect_close(gb, rgb);
}

INSTANTIATE_TEST_SUITE_P(
    Geometries, KernelParity,
    ::testing::Values(Case{3, 4, 5, 2, 16, 12}, Case{2, 3, 3, 1, 7, 9},
                      Case{5, 2, 1, 1, 4, 4}, Case{4, 6, 5, 2, 5, 7},
                      Case{16, 24, 5, 2, 32, 32}, Case{1, 1, 3, 2, 1, 1}));

TEST(KernelDeterminism, ThreadCountDoesNotChangeBits) {
  const ConvGeometry g{16, 24, 5, 2, 2, 1};
  const Tensor in = random_tensor(16, 32, 32, 11);
  const auto weight = random_values(weight_count(g), 12);
  const auto bias = random_values(24, 13);
  const auto bias_c = random_values(16, 14);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Tensor one = conv_transpose2d(in, weight, bias, g);
  const Tensor one_c = conv2d(one, weight, bias_c, {24, 16, 5, 2, 2, 0});
  omp_set_num_threads(4);
  const Tensor four = conv_transpose2d(in, weight, bias, g);
  const Tensor four_c = conv2d(four, weight, bias_c, {24, 16, 5, 2, 2, 0});
  omp_set_num_threads(saved);
  EXPECT_TRUE(bit_equal(one, four));
  EXPECT_TRUE(bit_equal(one_c, four_c));
}

TEST(KernelShapes, OutputSizes) {
  const ConvGeometry g{3, 3, 5, 2, 2, 1};
  EXPECT_EQ(conv_output_size(64, g), 32);
  EXPECT_EQ(conv_output_size(5, g), 3);
  EXPECT_EQ(conv_transpose_output_size(32, g), 64);
  EXPECT_EQ(weight_count(g), 3u * 3u * 25u);
}

TEST(KernelShapes, RejectsMismatchedParameters) {
  const ConvGeometry g{2, 2, 3, 1, 1, 0};
  const Tensor in(2, 4, 4);
  std::vector<double> weight(weight_count(g) - 1), bias(2);
  EXPECT_THROW(conv2d(in, weight, bias, g), ShapeError);
  std::vector<double> ok(weight_count(g));
  EXPECT_THROW(conv2d(Tensor(3, 4, 4), ok, bias, g), ShapeError);
}

}  // namespace
}  // namespace sicm::kernels
