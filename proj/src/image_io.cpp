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

#include "sicm/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "sicm/error.hpp"

namespace sicm {

namespace {

struct Anymap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> samples;
};

class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<char>& bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("anymap: malformed header");
    }
    long v = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1 << 24)) throw FormatError("anymap: header value too large");
    }
    return static_cast<int>(v);
  }

  // Binary rasters start after exactly one whitespace byte.
  std::size_t raster_start() const { return pos_ + 1; }
  std::size_t pos() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<char>& bytes_;
  std::size_t pos_ = 2;
};

Anymap read_anymap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw FormatError(path.string() + ": not a portable anymap");
  }
  const char kind = bytes[1];
  Anymap map;
  bool ascii = false;
  switch (kind) {
    case '2': ascii = true; [[fallthrough]];
    case '5': map.channels = 1; break;
    case '3': ascii = true; [[fallthrough]];
    case '6': map.channels = 3; break;
    default: throw FormatError(path.string() + ": unsupported anymap type");
  }
  HeaderReader header(bytes);
  map.width = header.next_int();
  map.height = header.next_int();
  const int maxval = header.next_int();
  if (map.width <= 0 || map.height <= 0 || maxval <= 0 || maxval > 255) {
    throw FormatError(path.string() + ": unsupported dimensions or depth");
  }
  const std::size_t count =
      static_cast<std::size_t>(map.width) * map.height * map.channels;
  map.samples.resize(count);
  if (ascii) {
    for (std::size_t j = 0; j < count; ++j) {
      const int v = header.next_int();
      if (v > maxval) throw FormatError(path.string() + ": sample > maxval");
      map.samples[j] = static_cast<std::uint8_t>(v * 255 / maxval);
    }
  } else {
    const std::size_t start = header.raster_start();
    if (start + count > bytes.size()) {
      throw FormatError(path.string() + ": truncated raster");
    }
    for (std::size_t j = 0; j < count; ++j) {
      const int v = static_cast<unsigned char>(bytes[start + j]);
      map.samples[j] = static_cast<std::uint8_t>(
          maxval == 255 ? v : std::min(255, v * 255 / maxval));
    }
  }
  return map;
}

void write_anymap(const std::filesystem::path& path, char kind, int width,
                  int height, const std::vector<std::uint8_t>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << 'P' << kind << '\n' << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(samples.data()),
            static_cast<std::streamsize>(samples.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(
      std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Tensor read_image(const std::filesystem::path& path) {
  const Anymap map = read_anymap(path);
  Tensor out(3, map.height, map.width);
  for (int y = 0; y < map.height; ++y)
    for (int x = 0; x < map.width; ++x)
      for (int c = 0; c < 3; ++c) {
        const int src = map.channels == 3 ? c : 0;
        out.at(c, y, x) =
            map.samples[(static_cast<std::size_t>(y) * map.width + x) *
                            map.channels + src] / 255.0;
      }
  return out;
}

void write_image(const Tensor& image, const std::filesystem::path& path) {
  if (image.channels() != 3) throw ShapeError("write_image expects RGB");
  std::vector<std::uint8_t> samples(image.size());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c)
        samples[(static_cast<std::size_t>(y) * image.width() + x) * 3 + c] =
            to_byte(image.at(c, y, x));
  write_anymap(path, '6', image.width(), image.height(), samples);
}

GrayImage read_graymap(const std::filesystem::path& path) {
  Anymap map = read_anymap(path);
  if (map.channels != 1) {
    throw FormatError(path.string() + ": expected a single-channel graymap");
  }
  return GrayImage{map.height, map.width, std::move(map.samples)};
}

void write_graymap(const GrayImage& image, const std::filesystem::path& path) {
  write_anymap(path, '5', image.width, image.height, image.pixels);
}

Tensor to_8bit(const Tensor& image) {
  Tensor out = image;
  for (double& v : out.values()) v = to_byte(v) / 255.0;
  return out;
}

std::vector<std::filesystem::path> list_images(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sicm
