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

#include "sicm/entropy_coder.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sicm/error.hpp"
#include "sicm/losses.hpp"
#include "test_util.hpp"

namespace sicm {
namespace {

void expect_valid_table(const CdfTable& t) {
  ASSERT_GE(t.symbol_count(), 1);
  EXPECT_EQ(t.cdf.front(), 0u);
  EXPECT_EQ(t.cdf.back(), kCdfTotal);
  for (int s = t.min_symbol; s <= t.max_symbol(); ++s) {
    EXPECT_GE(t.frequency(s), 1u);
  }
}

TEST(BuildCdf, NarrowGaussianPutsAlmostAllMassOnZero) {
  // The discretized mass on 0 for scale 0.11 is 0.9999945.
  const CdfTable t = build_cdf(0.0, kScaleFloor);
  expect_valid_table(t);
  EXPECT_GE(t.frequency(0), static_cast<std::uint32_t>(0.97 * kCdfTotal));
}

TEST(BuildCdf, SymmetricParamsGiveSymmetricTable) {
  const CdfTable t = build_cdf(0.0, 3.7);
  expect_valid_table(t);
  for (int s = 1; s <= kMaxSymbol; ++s) {
    EXPECT_EQ(t.frequency(s), t.frequency(-s)) << s;
  }
}

TEST(BuildCdf, StrictlyIncreasingForManyParams) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mean(-140.0, 140.0);
  std::uniform_real_distribution<double> log_scale(std::log(kScaleFloor), 5.0);
  for (int i = 0; i < 200; ++i) {
    const CdfTable t = build_cdf(mean(rng), std::exp(log_scale(rng)));
    for (std::size_t k = 1; k < t.cdf.size(); ++k) {
      ASSERT_GT(t.cdf[k], t.cdf[k - 1]);
    }
    EXPECT_EQ(t.cdf.back(), kCdfTotal);
  }
}

TEST(BuildCdf, TracksTheGaussianMass) {
  const CdfTable t = build_cdf(0.4, 2.0);
  for (int s = -3; s <= 4; ++s) {
    const double p = gaussian_interval_mass(s, 0.4, 2.0);
    EXPECT_NEAR(t.frequency(s) / double(kCdfTotal), p, 2e-3) << s;
  }
}

TEST(BuildCdf, RejectsEmptySupport) {
  EXPECT_THROW(build_cdf(0.0, 1.0, {3, 2}), ConfigError);
}

TEST(RangeCoder, EmptyMessageIsTerminatorOnly) {
  const auto bytes = range_encode({}, {});
  EXPECT_EQ(bytes.size(), RangeEncoder::kTerminatorBytes);
  EXPECT_TRUE(range_decode(bytes, {}, 0).empty());
}

TEST(RangeCoder, TenThousandSymbolsRoundTrip) {
  std::mt19937_64 rng(17);
  std::vector<CdfTable> tables;
  std::vector<int> symbols;
  std::uniform_real_distribution<double> mean(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.11, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double mu = mean(rng), sigma = scale(rng);
    tables.push_back(build_cdf(mu, sigma));
    std::normal_distribution<double> draw(mu, sigma);
    symbols.push_back(std::clamp(static_cast<int>(std::lround(draw(rng))),
                                 -kMaxSymbol, kMaxSymbol));
  }
  // Include the extremes of the support.
  symbols[0] = kMaxSymbol;
  symbols[1] = -kMaxSymbol;
  const auto bytes = range_encode(symbols, tables);
  EXPECT_EQ(range_decode(bytes, tables, symbols.size()), symbols);
}

TEST(RangeCoder, OneTableManySymbolsRoundTrip) {
  const CdfTable table = build_cdf(0.0, kScaleFloor);
  std::vector<int> symbols(5000, 0);
  symbols[2500] = 3;
  std::vector<CdfTable> tables(symbols.size(), table);
  const auto bytes = range_encode(symbols, tables);
  EXPECT_LT(bytes.size(), 40u);
  EXPECT_EQ(range_decode(bytes, tables, symbols.size()), symbols);
}

TEST(RangeCoder, SizeTracksEstimatedRate) {
  std::mt19937_64 rng(23);
  EntropyParams p{testing::random_tensor(4, 16, 16, 1, -3.0, 3.0),
                  testing::random_tensor(4, 16, 16, 2, 0.2, 6.0)};
  Tensor v(4, 16, 16);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::normal_distribution<double> draw(p.mean[i], p.scale[i]);
    v[i] = std::round(draw(rng));
  }
  const auto tables = build_cdfs(p);
  std::vector<int> symbols(v.values().begin(), v.values().end());
  const auto bytes = range_encode(symbols, tables);
  const double estimate = estimated_rate(v, p) / 8.0;
  EXPECT_LE(std::abs(double(bytes.size()) - estimate), 0.02 * estimate + 32.0);
}

TEST(RangeCoder, TruncationIsDetected) {
  const CdfTable table = build_cdf(0.0, 8.0);
  std::vector<int> symbols(2000);
  std::mt19937_64 rng(5);
  for (int& s : symbols) s = static_cast<int>(rng() % 31) - 15;
  std::vector<CdfTable> tables(symbols.size(), table);
  auto bytes = range_encode(symbols, tables);
  bytes.resize(bytes.size() / 2);
  EXPECT_THROW(range_decode(bytes, tables, symbols.size()), TruncatedStream);
  EXPECT_THROW(range_decode(std::vector<std::uint8_t>(3),
                            std::span(tables).first(1), 1),
               TruncatedStream);
}

TEST(RangeCoder, OutOfSupportSymbolIsAnInternalError) {
  const CdfTable table = build_cdf(0.0, 1.0, {-2, 2});
  std::vector<CdfTable> tables{table};
  EXPECT_THROW(range_encode(std::vector<int>{3}, tables), Error);
}

}  // namespace
}  // namespace sicm
