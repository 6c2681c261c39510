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

#ifndef SICM_ENTROPY_CODER_HPP_
#define SICM_ENTROPY_CODER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sicm/latent.hpp"

namespace sicm {

inline constexpr int kCdfPrecisionBits = 16;
inline constexpr std::uint32_t kCdfTotal = 1u << kCdfPrecisionBits;

struct SymbolSupport {
  int min_symbol = -kMaxSymbol;
  int max_symbol = kMaxSymbol;
  int size() const { return max_symbol - min_symbol + 1; }
};

// Cumulative frequencies for one symbol distribution: cdf[0] = 0,
// cdf[size] = 2^16, every symbol has frequency >= 1.
struct CdfTable {
  int min_symbol = 0;
  std::vector<std::uint32_t> cdf;

  int symbol_count() const { return static_cast<int>(cdf.size()) - 1; }
  int max_symbol() const { return min_symbol + symbol_count() - 1; }
  std::uint32_t frequency(int symbol) const {
    const int s = symbol - min_symbol;
    return cdf[s + 1] - cdf[s];
  }
};

// Discretized Gaussian over the support; the two end symbols absorb the tails.
CdfTable build_cdf(double mean, double scale, SymbolSupport support = {});
std::vector<CdfTable> build_cdfs(const EntropyParams& params,
                                 SymbolSupport support = {});

// Multi-symbol range coder: 64-bit low with carry propagation, 32-bit range,
// byte-wise renormalization, 16-bit frequency tables. An empty message
// encodes to kTerminatorBytes bytes.
class RangeEncoder {
 public:
  static constexpr std::size_t kTerminatorBytes = 5;

  void encode(std::uint32_t cum_low, std::uint32_t freq);
  void encode_symbol(int symbol, const CdfTable& table);
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  // Throws TruncatedStream if fewer than kTerminatorBytes bytes.
  explicit RangeDecoder(std::span<const std::uint8_t> bytes);

  int decode_symbol(const CdfTable& table);
  // Bytes read so far; decoded symbols never depend on later bytes.
  std::size_t consumed() const { return pos_; }

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

std::vector<std::uint8_t> range_encode(std::span<const int> symbols,
                                       std::span<const CdfTable> tables);
std::vector<int> range_decode(std::span<const std::uint8_t> bytes,
                              std::span<const CdfTable> tables,
                              std::size_t count);

}  // namespace sicm

#endif  // SICM_ENTROPY_CODER_HPP_
