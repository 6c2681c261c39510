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

#include "sicm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "sicm/error.hpp"

namespace sicm {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'C', 'M', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;
enum : std::uint8_t { kKindBase = 0, kKindEnhancement = 1 };

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (n > in_.size() - pos_) throw FormatError("checkpoint truncated");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  template <typename T>
  T le() {
    auto s = bytes(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(s[i]) << (8 * i));
    }
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> serialize(std::uint8_t kind,
                                    const ModelConfig& config,
                                    std::uint64_t base_hash,
                                    const std::vector<const Parameter*>& params) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.le<std::uint32_t>(kVersion);
  w.le<std::uint8_t>(kind);
  w.le<std::uint64_t>(base_hash);
  const std::string text = config.to_kv().to_text();
  w.le<std::uint32_t>(static_cast<std::uint32_t>(text.size()));
  w.bytes(text.data(), text.size());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    w.le<std::uint16_t>(static_cast<std::uint16_t>(p->name.size()));
    w.bytes(p->name.data(), p->name.size());
    w.le<std::uint8_t>(static_cast<std::uint8_t>(p->dims.size()));
    for (int d : p->dims) w.le<std::uint32_t>(static_cast<std::uint32_t>(d));
    for (double v : p->value) w.le<std::uint64_t>(std::bit_cast<std::uint64_t>(v));
  }
  return w.take();
}

struct Header {
  std::uint8_t kind;
  std::uint64_t base_hash;
  ModelConfig config;
};

Header read_header(Reader& r) {
  auto magic = r.bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  if (r.le<std::uint32_t>() != kVersion) {
    throw FormatError("unsupported checkpoint version");
  }
  Header h;
  h.kind = r.le<std::uint8_t>();
  h.base_hash = r.le<std::uint64_t>();
  const auto len = r.le<std::uint32_t>();
  auto text = r.bytes(len);
  h.config = ModelConfig::from_kv(KeyValueConfig::parse(
      std::string_view(reinterpret_cast<const char*>(text.data()), len)));
  h.config.validate();
  return h;
}

void read_parameters(Reader& r, const std::vector<Parameter*>& params) {
  if (r.le<std::uint32_t>() != params.size()) {
    throw FormatError("checkpoint tensor count does not match its config");
  }
  for (Parameter* p : params) {
    const auto name_len = r.le<std::uint16_t>();
    auto name = r.bytes(name_len);
    if (std::string(name.begin(), name.end()) != p->name) {
      throw FormatError("checkpoint tensor '" +
                        std::string(name.begin(), name.end()) +
                        "' where '" + p->name + "' was expected");
    }
    const auto rank = r.le<std::uint8_t>();
    if (rank != p->dims.size()) throw FormatError(p->name + ": rank mismatch");
    for (int d : p->dims) {
      if (r.le<std::uint32_t>() != static_cast<std::uint32_t>(d)) {
        throw FormatError(p->name + ": dimension mismatch");
      }
    }
    for (double& v : p->value) v = std::bit_cast<double>(r.le<std::uint64_t>());
  }
  if (!r.done()) throw FormatError("trailing bytes after checkpoint");
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> serialize_model(const BaseModel& model) {
  return serialize(kKindBase, model.config, 0, model.parameters());
}

std::vector<std::uint8_t> serialize_model(const EnhancementModel& model) {
  return serialize(kKindEnhancement, model.config, model.base_hash,
                   model.parameters());
}

BaseModel deserialize_base(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const Header h = read_header(r);
  if (h.kind != kKindBase) throw FormatError("not a base-model checkpoint");
  BaseModel model(h.config);
  read_parameters(r, model.parameters());
  return model;
}

EnhancementModel deserialize_enhancement(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const Header h = read_header(r);
  if (h.kind != kKindEnhancement) {
    throw FormatError("not an enhancement-model checkpoint");
  }
  EnhancementModel model(h.config);
  model.base_hash = h.base_hash;
  read_parameters(r, model.parameters());
  return model;
}

std::uint64_t model_hash(const BaseModel& model) {
  return fnv1a64(serialize_model(model));
}

std::uint64_t model_hash(const EnhancementModel& model) {
  return fnv1a64(serialize_model(model));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void save_checkpoint(const BaseModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

void save_checkpoint(const EnhancementModel& model,
                     const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

BaseModel load_base_checkpoint(const std::filesystem::path& path) {
  return deserialize_base(read_file(path));
}

EnhancementModel load_enhancement_checkpoint(const std::filesystem::path& path) {
  return deserialize_enhancement(read_file(path));
}

}  // namespace sicm
