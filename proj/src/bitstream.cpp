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

#include "sicm/bitstream.hpp"

#include <cstring>
#include <limits>

#include "sicm/error.hpp"

namespace sicm {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'C', 'M'};

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_section(std::vector<std::uint8_t>& out,
                 const std::vector<std::uint8_t>& payload) {
  if (payload.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("section too large");
  }
  put_be(out, payload.size(), 4);
  out.insert(out.end(), payload.begin(), payload.end());
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t be(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::vector<std::uint8_t> section() {
    const auto len = static_cast<std::size_t>(be(4));
    need(len);
    std::vector<std::uint8_t> out(in_.begin() + pos_, in_.begin() + pos_ + len);
    pos_ += len;
    return out;
  }
  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) {
    if (n > in_.size() - pos_) {
      throw TruncatedStream("bitstream truncated at byte " +
                            std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

ScalableBitstream parse_header(Cursor& c, std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw TruncatedStream("bitstream header truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("bad magic: not a .sicm stream");
  }
  c.be(4);
  ScalableBitstream s;
  s.version = static_cast<std::uint8_t>(c.be(1));
  if (s.version != kBitstreamVersion) {
    throw FormatError("unsupported bitstream version " +
                      std::to_string(s.version));
  }
  s.flags = static_cast<std::uint8_t>(c.be(1));
  if (s.flags & ~kFlagEnhancement) throw FormatError("unknown flag bits set");
  s.width = static_cast<std::uint16_t>(c.be(2));
  s.height = static_cast<std::uint16_t>(c.be(2));
  s.n = static_cast<std::uint8_t>(c.be(1));
  s.m = static_cast<std::uint8_t>(c.be(1));
  s.lambda_id = static_cast<std::uint8_t>(c.be(1));
  s.model_hash = c.be(8);
  if (s.width == 0 || s.height == 0 || s.n == 0) {
    throw FormatError("header declares an empty image or zero groups");
  }
  return s;
}

}  // namespace

std::vector<std::uint8_t> serialize_bitstream(const ScalableBitstream& s) {
  if (!s.has_enhancement() && (!s.za.empty() || !s.ya.empty())) {
    throw FormatError("enhancement payload without the enhancement flag");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 16 + s.z.size() + s.y.size() + s.za.size() +
              s.ya.size());
  out.insert(out.end(), kMagic, kMagic + sizeof(kMagic));
  put_be(out, s.version, 1);
  put_be(out, s.flags, 1);
  put_be(out, s.width, 2);
  put_be(out, s.height, 2);
  put_be(out, s.n, 1);
  put_be(out, s.m, 1);
  put_be(out, s.lambda_id, 1);
  put_be(out, s.model_hash, 8);
  put_section(out, s.z);
  put_section(out, s.y);
  if (s.has_enhancement()) {
    put_section(out, s.za);
    put_section(out, s.ya);
  }
  return out;
}

ScalableBitstream parse_bitstream(std::span<const std::uint8_t> bytes,
                                  ParseMode mode) {
  Cursor c(bytes);
  ScalableBitstream s = parse_header(c, bytes);
  s.z = c.section();
  s.y = c.section();
  if (mode == ParseMode::kBaseOnly) return s;
  if (s.has_enhancement()) {
    s.za = c.section();
    s.ya = c.section();
  }
  if (!c.at_end()) {
    throw FormatError("declared section lengths do not cover the stream (" +
                      std::to_string(bytes.size() - c.pos()) +
                      " trailing bytes)");
  }
  return s;
}

std::vector<std::uint8_t> strip_enhancement(
    std::span<const std::uint8_t> bytes) {
  ScalableBitstream s = parse_bitstream(bytes, ParseMode::kBaseOnly);
  s.flags &= static_cast<std::uint8_t>(~kFlagEnhancement);
  s.m = 0;
  return serialize_bitstream(s);
}

SectionSizes section_sizes(std::span<const std::uint8_t> bytes) {
  const ScalableBitstream s = parse_bitstream(bytes);
  SectionSizes sizes;
  sizes.base_bytes = kHeaderBytes + 2 * kSectionLengthBytes + s.z.size() +
                     s.y.size();
  if (s.has_enhancement()) {
    sizes.enhancement_bytes = 2 * kSectionLengthBytes + s.za.size() + s.ya.size();
  }
  return sizes;
}

SectionOffsets section_offsets(const ScalableBitstream& s) {
  SectionOffsets o;
  o.z_begin = kHeaderBytes + kSectionLengthBytes;
  o.y_begin = o.z_begin + s.z.size() + kSectionLengthBytes;
  o.za_begin = o.y_begin + s.y.size() + kSectionLengthBytes;
  o.ya_begin = o.za_begin + s.za.size() + kSectionLengthBytes;
  return o;
}

}  // namespace sicm
