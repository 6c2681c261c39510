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

#ifndef SICM_LOSSES_HPP_
#define SICM_LOSSES_HPP_

#include "sicm/latent.hpp"
#include "sicm/mask.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

// Per-symbol probability floor applied before the logarithm; bounds the code
// length of any symbol at 15 bits.
inline constexpr double kProbabilityFloor = 1.0 / 32768.0;

// P(value) under N(mean, scale^2) integrated over [value - 0.5, value + 0.5).
// Computed from the upper tail so far-out symbols keep relative precision.
double gaussian_interval_mass(double value, double mean, double scale);

struct RateGradients {
  Tensor symbols;
  Tensor mean;
  Tensor scale;
};

// -sum log2 max(P(symbol), floor) in bits. When `grads` is non-null it
// receives d(bits)/d(symbols, mean, scale); floored symbols contribute zero
// gradient.
double estimated_rate(const Tensor& symbols, const EntropyParams& params,
                      RateGradients* grads = nullptr);

double mse(const Tensor& x, const Tensor& x_hat);
Tensor mse_grad(const Tensor& x, const Tensor& x_hat);  // d/d(x_hat)

// mse(x * m, x_hat * m), averaged over all 3*H*W elements.
double masked_mse(const Tensor& x, const Tensor& x_hat,
                  const BinaryMask& mask);
Tensor masked_mse_grad(const Tensor& x, const Tensor& x_hat,
                       const BinaryMask& mask);

struct LossBreakdown {
  double rate_y = 0.0;
  double rate_z = 0.0;
  double distortion = 0.0;
  double total = 0.0;
  double lambda = 0.0;
};

// rate_y + rate_z + lambda * mse(x, x_hat)
LossBreakdown loss_lic(const Tensor& x, const Tensor& x_hat, double rate_y,
                       double rate_z, double lambda);
// rate_y + rate_z + lambda * masked_mse(x, x_hat, mask)
LossBreakdown loss_saicm(const Tensor& x, const Tensor& x_hat,
                         const BinaryMask& mask, double rate_y, double rate_z,
                         double lambda);
// Enhancement-layer objective; rates cover ya / za only.
LossBreakdown loss_enh(const Tensor& x, const Tensor& x_hat, double rate_ya,
                       double rate_za, double lambda);

}  // namespace sicm

#endif  // SICM_LOSSES_HPP_
