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

#include <random>

#include <gtest/gtest.h>

#include "sicm/error.hpp"

namespace sicm {
namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

ScalableBitstream sample_stream(bool enhancement, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  ScalableBitstream s;
  s.width = 640;
  s.height = 480;
  s.n = 5;
  s.m = enhancement ? 3 : 0;
  s.lambda_id = 2;
  s.model_hash = 0x0123456789ABCDEFULL;
  s.z = random_bytes(37, rng);
  s.y = random_bytes(301, rng);
  if (enhancement) {
    s.flags = kFlagEnhancement;
    s.za = random_bytes(11, rng);
    s.ya = random_bytes(97, rng);
  }
  return s;
}

TEST(Container, HeaderLayoutIsBigEndian) {
  const auto bytes = serialize_bitstream(sample_stream(true));
  ASSERT_GE(bytes.size(), kHeaderBytes);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SICM");
  EXPECT_EQ(bytes[4], 1);     // version
  EXPECT_EQ(bytes[5], 0x01);  // flags
  EXPECT_EQ(bytes[6], 0x02);  // width 640
  EXPECT_EQ(bytes[7], 0x80);
  EXPECT_EQ(bytes[8], 0x01);  // height 480
  EXPECT_EQ(bytes[9], 0xE0);
  EXPECT_EQ(bytes[10], 5);
  EXPECT_EQ(bytes[11], 3);
  EXPECT_EQ(bytes[12], 2);
  EXPECT_EQ(bytes[13], 0x01);  // model hash, most significant byte first
  EXPECT_EQ(bytes[20], 0xEF);
  // z section length
  EXPECT_EQ(bytes[21], 0);
  EXPECT_EQ(bytes[24], 37);
  EXPECT_EQ(bytes.size(), kHeaderBytes + 4 * 4 + 37 + 301 + 11 + 97);
}

TEST(Container, ParseSerializeIsAFixedPoint) {
  for (bool enh : {false, true}) {
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
      const ScalableBitstream s = sample_stream(enh, seed);
      const auto bytes = serialize_bitstream(s);
      const ScalableBitstream parsed = parse_bitstream(bytes);
      EXPECT_EQ(parsed, s);
      EXPECT_EQ(serialize_bitstream(parsed), bytes);
    }
  }
}

TEST(Container, EmptySectionsRoundTrip) {
  ScalableBitstream s = sample_stream(true);
  s.za.clear();
  s.y.clear();
  EXPECT_EQ(parse_bitstream(serialize_bitstream(s)), s);
}

TEST(Container, BadMagicIsRejected) {
  auto bytes = serialize_bitstream(sample_stream(false));
  bytes[0] = 'X';
  EXPECT_THROW(parse_bitstream(bytes), FormatError);
}

TEST(Container, UnknownVersionAndFlagsAreRejected) {
  auto bytes = serialize_bitstream(sample_stream(false));
  auto v = bytes;
  v[4] = 2;
  EXPECT_THROW(parse_bitstream(v), FormatError);
  auto f = bytes;
  f[5] = 0x04;
  EXPECT_THROW(parse_bitstream(f), FormatError);
}

TEST(Container, LengthMismatchesAreRejected) {
  const auto bytes = serialize_bitstream(sample_stream(true));
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(parse_bitstream(truncated), TruncatedStream);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(parse_bitstream(trailing), FormatError);
  EXPECT_THROW(parse_bitstream(std::vector<std::uint8_t>(bytes.begin(),
                                                         bytes.begin() + 10)),
               TruncatedStream);
}

TEST(Container, BaseOnlyParseIgnoresEnhancementBytes) {
  auto bytes = serialize_bitstream(sample_stream(true));
  const std::size_t base_end =
      kHeaderBytes + 2 * kSectionLengthBytes + 37 + 301;
  for (std::size_t i = base_end; i < bytes.size(); ++i) bytes[i] ^= 0x5A;
  bytes.resize(bytes.size() - 20);
  EXPECT_THROW(parse_bitstream(bytes), Error);
  const ScalableBitstream base = parse_bitstream(bytes, ParseMode::kBaseOnly);
  const ScalableBitstream want = sample_stream(true);
  EXPECT_EQ(base.z, want.z);
  EXPECT_EQ(base.y, want.y);
  EXPECT_TRUE(base.za.empty());
}

TEST(Container, StripEnhancementKeepsBaseSections) {
  const ScalableBitstream s = sample_stream(true);
  const auto stripped = strip_enhancement(serialize_bitstream(s));
  const ScalableBitstream p = parse_bitstream(stripped);
  EXPECT_FALSE(p.has_enhancement());
  EXPECT_EQ(p.m, 0);
  EXPECT_EQ(p.z, s.z);
  EXPECT_EQ(p.y, s.y);
  EXPECT_TRUE(p.ya.empty());
}

TEST(Container, SectionSizesSplitBaseAndEnhancement) {
  const auto bytes = serialize_bitstream(sample_stream(true));
  const SectionSizes sizes = section_sizes(bytes);
  EXPECT_EQ(sizes.base_bytes, kHeaderBytes + 8 + 37 + 301);
  EXPECT_EQ(sizes.enhancement_bytes, 8u + 11 + 97);
  EXPECT_EQ(sizes.total(), bytes.size());
  const auto plain = serialize_bitstream(sample_stream(false));
  EXPECT_EQ(section_sizes(plain).enhancement_bytes, 0u);
}

TEST(Container, EnhancementPayloadRequiresFlag) {
  ScalableBitstream s = sample_stream(false);
  s.ya = {1, 2, 3};
  EXPECT_THROW(serialize_bitstream(s), FormatError);
}

}  // namespace
}  // namespace sicm
