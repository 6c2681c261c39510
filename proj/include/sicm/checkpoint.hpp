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

#ifndef SICM_CHECKPOINT_HPP_
#define SICM_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sicm/model.hpp"

// Checkpoint container, all integers little-endian:
//   "SICMCKPT" | u32 version | u8 kind (0 base, 1 enhancement)
//   | u64 base_hash | u32 len + config text (key = value lines)
//   | u32 tensor count | per tensor: u16 len + name, u8 rank, u32 dims...,
//     IEEE-754 binary64 values
// Serialization is a pure function of (config, weights), so the FNV-1a hash
// of the bytes identifies a model; bitstream headers carry it.
namespace sicm {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_model(const BaseModel& model);
std::vector<std::uint8_t> serialize_model(const EnhancementModel& model);
BaseModel deserialize_base(std::span<const std::uint8_t> bytes);
EnhancementModel deserialize_enhancement(std::span<const std::uint8_t> bytes);

std::uint64_t model_hash(const BaseModel& model);
std::uint64_t model_hash(const EnhancementModel& model);

void save_checkpoint(const BaseModel& model, const std::filesystem::path& path);
void save_checkpoint(const EnhancementModel& model,
                     const std::filesystem::path& path);
BaseModel load_base_checkpoint(const std::filesystem::path& path);
EnhancementModel load_enhancement_checkpoint(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace sicm

#endif  // SICM_CHECKPOINT_HPP_
