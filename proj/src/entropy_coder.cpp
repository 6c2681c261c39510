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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sicm/error.hpp"
#include "sicm/losses.hpp"

namespace sicm {

namespace {

constexpr std::uint32_t kTop = 1u << 24;

// Beyond this many scales from the mean every interval mass is below 1e-32
// and the symbol gets the minimum frequency anyway.
constexpr double kNegligibleSigmas = 12.0;

double lower_tail(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

}  // namespace

CdfTable build_cdf(double mean, double scale, SymbolSupport support) {
  const int count = support.size();
  if (count <= 0) throw ConfigError("empty symbol support");
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(mean)) {
    throw Error("build_cdf: invalid Gaussian parameters");
  }
  if (static_cast<std::uint32_t>(count) > kCdfTotal) {
    throw ConfigError("support larger than CDF precision");
  }
  std::vector<double> mass(count, 0.0);
  const double reach = kNegligibleSigmas * scale + 1.0;
  for (int k = 0; k < count; ++k) {
    const int v = support.min_symbol + k;
    if (std::abs(v - mean) > reach) continue;
    if (count == 1) {
      mass[k] = 1.0;
    } else if (k == 0) {
      mass[k] = lower_tail((v + 0.5 - mean) / scale);
    } else if (k == count - 1) {
      mass[k] = lower_tail((mean - (v - 0.5)) / scale);
    } else {
      mass[k] = gaussian_interval_mass(v, mean, scale);
    }
  }
  const double spread = static_cast<double>(kCdfTotal - count);
  std::vector<std::uint32_t> freq(count);
  std::uint32_t used = 0;
  int argmax = 0;
  for (int k = 0; k < count; ++k) {
    freq[k] = 1 + static_cast<std::uint32_t>(std::floor(mass[k] * spread));
    used += freq[k];
    if (mass[k] > mass[argmax]) argmax = k;
  }
  if (used > kCdfTotal) throw Error("build_cdf: frequency overflow");
  freq[argmax] += kCdfTotal - used;

  CdfTable table;
  table.min_symbol = support.min_symbol;
  table.cdf.resize(count + 1);
  table.cdf[0] = 0;
  for (int k = 0; k < count; ++k) table.cdf[k + 1] = table.cdf[k] + freq[k];
  return table;
}

std::vector<CdfTable> build_cdfs(const EntropyParams& params,
                                 SymbolSupport support) {
  if (!params.mean.same_shape(params.scale)) {
    throw ShapeError("entropy params: mean/scale shape mismatch");
  }
  std::vector<CdfTable> tables(params.mean.size());
#pragma omp parallel for schedule(static) if (tables.size() > 256)
  for (std::size_t j = 0; j < tables.size(); ++j) {
    tables[j] = build_cdf(params.mean[j], params.scale[j], support);
  }
  return tables;
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::encode(std::uint32_t cum_low, std::uint32_t freq) {
  const std::uint32_t r = range_ >> kCdfPrecisionBits;
  low_ += static_cast<std::uint64_t>(r) * cum_low;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::encode_symbol(int symbol, const CdfTable& table) {
  if (symbol < table.min_symbol || symbol > table.max_symbol()) {
    throw Error("range coder: symbol " + std::to_string(symbol) +
                " outside table support");
  }
  const int s = symbol - table.min_symbol;
  encode(table.cdf[s], table.cdf[s + 1] - table.cdf[s]);
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (std::size_t i = 0; i < kTerminatorBytes; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes)
    : bytes_(bytes) {
  if (bytes.size() < RangeEncoder::kTerminatorBytes) {
    throw TruncatedStream("range-coded stream shorter than its terminator");
  }
  for (std::size_t i = 0; i < RangeEncoder::kTerminatorBytes; ++i) {
    code_ = (code_ << 8) | next_byte();
  }
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= bytes_.size()) throw TruncatedStream("range-coded stream truncated");
  return bytes_[pos_++];
}

int RangeDecoder::decode_symbol(const CdfTable& table) {
  const std::uint32_t r = range_ >> kCdfPrecisionBits;
  // Only a corrupted stream can push the target past the table.
  const std::uint32_t target = std::min(code_ / r, kCdfTotal - 1);
  const auto it = std::upper_bound(table.cdf.begin() + 1, table.cdf.end(),
                                   target);
  const int s = static_cast<int>(it - table.cdf.begin()) - 1;
  code_ -= r * table.cdf[s];
  range_ = r * (table.cdf[s + 1] - table.cdf[s]);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return table.min_symbol + s;
}

std::vector<std::uint8_t> range_encode(std::span<const int> symbols,
                                       std::span<const CdfTable> tables) {
  if (symbols.size() != tables.size()) {
    throw ShapeError("range_encode: one table per symbol required");
  }
  RangeEncoder enc;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    enc.encode_symbol(symbols[j], tables[j]);
  }
  return enc.finish();
}

std::vector<int> range_decode(std::span<const std::uint8_t> bytes,
                              std::span<const CdfTable> tables,
                              std::size_t count) {
  if (tables.size() != count) {
    throw ShapeError("range_decode: one table per symbol required");
  }
  RangeDecoder dec(bytes);
  std::vector<int> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = dec.decode_symbol(tables[j]);
  return out;
}

}  // namespace sicm
