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

// Writes procedurally generated scenes (PPM) for desk-scale experiments.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "sicm/image_io.hpp"
#include "sicm/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic toy dataset", "sicm-toydata"};
  std::string out;
  int count = 512;
  int size = 64;
  std::uint64_t seed = 1;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--count", count, "Number of images")
      ->check(CLI::PositiveNumber);
  app.add_option("--size", size, "Width and height")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out);
    const auto scenes = sicm::synthetic_scenes(count, size, size, seed);
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "scene%05zu.ppm", i);
      sicm::write_image(scenes[i], std::filesystem::path(out) / name);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
