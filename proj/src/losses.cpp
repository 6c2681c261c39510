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

#include "sicm/losses.hpp"

#include <cmath>
#include <numbers>

#include "sicm/error.hpp"

namespace sicm {

namespace {

double upper_tail(double t) {
  return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

double std_normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

void check_same(const Tensor& a, const Tensor& b, const char* what) {
  if (!a.same_shape(b)) throw ShapeError(std::string(what) + ": shape mismatch");
}

void check_mask(const Tensor& x, const BinaryMask& mask) {
  if (!mask.matches(x)) throw ShapeError("mask size differs from image size");
}

LossBreakdown combine(double rate_y, double rate_z, double distortion,
                      double lambda) {
  LossBreakdown out;
  out.rate_y = rate_y;
  out.rate_z = rate_z;
  out.distortion = distortion;
  out.lambda = lambda;
  out.total = rate_y + rate_z + lambda * distortion;
  return out;
}

}  // namespace

double gaussian_interval_mass(double value, double mean, double scale) {
  const double d = std::abs(value - mean);
  return upper_tail((d - 0.5) / scale) - upper_tail((d + 0.5) / scale);
}

double estimated_rate(const Tensor& symbols, const EntropyParams& params,
                      RateGradients* grads) {
  check_same(symbols, params.mean, "estimated_rate");
  check_same(symbols, params.scale, "estimated_rate");
  if (grads) {
    grads->symbols = Tensor(symbols.channels(), symbols.height(),
                            symbols.width());
    grads->mean = grads->symbols;
    grads->scale = grads->symbols;
  }
  const double inv_ln2 = 1.0 / std::numbers::ln2;
  double bits = 0.0;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    const double mu = params.mean[j];
    const double sigma = params.scale[j];
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
      throw Error("estimated_rate: non-finite or non-positive parameters");
    }
    const double p = gaussian_interval_mass(symbols[j], mu, sigma);
    if (!(p > kProbabilityFloor)) {
      bits += -std::log2(kProbabilityFloor);
      continue;
    }
    bits += -std::log2(p);
    if (grads) {
      const double a = (symbols[j] - mu + 0.5) / sigma;
      const double b = (symbols[j] - mu - 0.5) / sigma;
      const double pa = std_normal_pdf(a);
      const double pb = std_normal_pdf(b);
      const double dp_dv = (pa - pb) / sigma;
      const double dp_dsigma = -(a * pa - b * pb) / sigma;
      const double k = -inv_ln2 / p;
      grads->symbols[j] = k * dp_dv;
      grads->mean[j] = -k * dp_dv;
      grads->scale[j] = k * dp_dsigma;
    }
  }
  return bits;
}

double mse(const Tensor& x, const Tensor& x_hat) {
  check_same(x, x_hat, "mse");
  if (x.size() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x_hat[j] - x[j];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

Tensor mse_grad(const Tensor& x, const Tensor& x_hat) {
  check_same(x, x_hat, "mse");
  Tensor g(x.channels(), x.height(), x.width());
  const double k = 2.0 / static_cast<double>(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) g[j] = k * (x_hat[j] - x[j]);
  return g;
}

double masked_mse(const Tensor& x, const Tensor& x_hat,
                  const BinaryMask& mask) {
  check_same(x, x_hat, "masked_mse");
  check_mask(x, mask);
  if (x.size() == 0) return 0.0;
  double acc = 0.0;
  for (int c = 0; c < x.channels(); ++c)
    for (int y = 0; y < x.height(); ++y)
      for (int col = 0; col < x.width(); ++col) {
        if (!mask.at(y, col)) continue;
        const double d = x_hat.at(c, y, col) - x.at(c, y, col);
        acc += d * d;
      }
  return acc / static_cast<double>(x.size());
}

Tensor masked_mse_grad(const Tensor& x, const Tensor& x_hat,
                       const BinaryMask& mask) {
  check_same(x, x_hat, "masked_mse");
  check_mask(x, mask);
  Tensor g(x.channels(), x.height(), x.width());
  const double k = 2.0 / static_cast<double>(x.size());
  for (int c = 0; c < x.channels(); ++c)
    for (int y = 0; y < x.height(); ++y)
      for (int col = 0; col < x.width(); ++col) {
        if (mask.at(y, col)) {
          g.at(c, y, col) = k * (x_hat.at(c, y, col) - x.at(c, y, col));
        }
      }
  return g;
}

LossBreakdown loss_lic(const Tensor& x, const Tensor& x_hat, double rate_y,
                       double rate_z, double lambda) {
  return combine(rate_y, rate_z, mse(x, x_hat), lambda);
}

LossBreakdown loss_saicm(const Tensor& x, const Tensor& x_hat,
                         const BinaryMask& mask, double rate_y, double rate_z,
                         double lambda) {
  return combine(rate_y, rate_z, masked_mse(x, x_hat, mask), lambda);
}

LossBreakdown loss_enh(const Tensor& x, const Tensor& x_hat, double rate_ya,
                       double rate_za, double lambda) {
  return combine(rate_ya, rate_za, mse(x, x_hat), lambda);
}

}  // namespace sicm
