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

#ifndef SICM_BITSTREAM_HPP_
#define SICM_BITSTREAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Two-layer container (".sicm"). Multi-byte integers are big-endian.
//
//   offset size  field
//   0      4     magic "SICM"
//   4      1     version (1)
//   5      1     flags, bit0 = enhancement layer present
//   6      2     width
//   8      2     height
//   10     1     n (base groups)
//   11     1     m (enhancement groups, 0 when absent)
//   12     1     lambda_id (index into kLambdaTable, 0xFF if unregistered)
//   13     8     model_hash (hash of the base model)
//   21     ...   sections, each u32 length + payload:
//                z, y, then za, ya when bit0 is set
//
// The base sections alone decode the machine-layer image.
namespace sicm {

inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr std::uint8_t kFlagEnhancement = 0x01;
inline constexpr std::size_t kHeaderBytes = 21;
inline constexpr std::size_t kSectionLengthBytes = 4;

struct ScalableBitstream {
  std::uint8_t version = kBitstreamVersion;
  std::uint8_t flags = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t n = 0;
  std::uint8_t m = 0;
  std::uint8_t lambda_id = 0;
  std::uint64_t model_hash = 0;
  std::vector<std::uint8_t> z;
  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> za;
  std::vector<std::uint8_t> ya;

  bool has_enhancement() const { return (flags & kFlagEnhancement) != 0; }

  friend bool operator==(const ScalableBitstream&,
                         const ScalableBitstream&) = default;
};

enum class ParseMode {
  kFull,      // every section validated, no trailing bytes
  kBaseOnly,  // header + z + y; anything after the y section is ignored
};

std::vector<std::uint8_t> serialize_bitstream(const ScalableBitstream& stream);
ScalableBitstream parse_bitstream(std::span<const std::uint8_t> bytes,
                                  ParseMode mode = ParseMode::kFull);

// Clears the enhancement flag and drops the za / ya sections.
std::vector<std::uint8_t> strip_enhancement(std::span<const std::uint8_t> bytes);

struct SectionSizes {
  std::size_t base_bytes = 0;         // header + z + y, length fields included
  std::size_t enhancement_bytes = 0;  // za + ya, length fields included
  std::size_t total() const { return base_bytes + enhancement_bytes; }
};
SectionSizes section_sizes(std::span<const std::uint8_t> bytes);

// Byte range [begin, end) of each section payload within a serialized stream.
struct SectionOffsets {
  std::size_t z_begin = 0, y_begin = 0, za_begin = 0, ya_begin = 0;
};
SectionOffsets section_offsets(const ScalableBitstream& stream);

}  // namespace sicm

#endif  // SICM_BITSTREAM_HPP_
