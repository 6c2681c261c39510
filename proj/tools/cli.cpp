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

#include "cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "sicm/bitstream.hpp"
#include "sicm/checkpoint.hpp"
#include "sicm/codec.hpp"
#include "sicm/error.hpp"
#include "sicm/evaluation.hpp"
#include "sicm/image_io.hpp"
#include "sicm/mask.hpp"
#include "sicm/training.hpp"

namespace sicm::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string in, out, config, base, enh, layer = "machine", csv, jsonl, grid,
      dc_csv, objective = "masked";
  int dilate = kDefaultDilationRadius;
};

int cmd_mask(const Options& o, std::ostream& out) {
  const auto images = list_images(o.in);
  if (images.empty()) throw IoError("no images found in " + o.in);
  std::filesystem::create_directories(o.out);
  for (const auto& path : images) {
    const auto mask_path = mask_path_for(o.out, path);
    save_mask(edge_mask(read_image(path), o.dilate), mask_path);
    out << mask_path.string() << '\n';
  }
  return kExitOk;
}

void report(const TrainStats& stats, std::ostream& out) {
  out << "loss " << format_double(stats.initial_loss) << " -> "
      << format_double(stats.final_loss) << " over " << stats.log.size()
      << " steps\n";
}

int cmd_train_base(const Options& o, std::ostream& out) {
  BaseObjective objective;
  if (o.objective == "masked") {
    objective = BaseObjective::kMasked;
  } else if (o.objective == "plain") {
    objective = BaseObjective::kPlain;
  } else {
    throw UsageError("--objective must be masked or plain");
  }
  const TrainConfig config = TrainConfig::load(o.config);
  const Dataset data =
      load_dataset(config, objective == BaseObjective::kMasked);
  TrainStats stats;
  train_base(config, data, objective, &stats, o.out);
  report(stats, out);
  return kExitOk;
}

int cmd_train_enh(const Options& o, std::ostream& out) {
  const TrainConfig config = TrainConfig::load(o.config);
  const BaseModel base = load_base_checkpoint(o.base);
  const Dataset data = load_dataset(config, false);
  TrainStats stats;
  train_enhancement(config, data, base, &stats, o.out);
  report(stats, out);
  return kExitOk;
}

int cmd_encode(const Options& o, std::ostream& out) {
  const Tensor x = read_image(o.in);
  const BaseModel base = load_base_checkpoint(o.base);
  std::vector<std::uint8_t> bytes;
  if (o.enh.empty()) {
    bytes = serialize_bitstream(encode_image(x, base));
  } else {
    const EnhancementModel enh = load_enhancement_checkpoint(o.enh);
    bytes = serialize_bitstream(encode_image(x, base, &enh));
  }
  write_file(o.out, bytes);
  const Bpp rate = bpp(bytes, x.width(), x.height());
  out << bytes.size() << " bytes, " << format_double(rate.base)
      << " bpp base, " << format_double(rate.enh) << " bpp enhancement\n";
  return kExitOk;
}

int cmd_decode(const Options& o, std::ostream&) {
  if (o.layer != "machine" && o.layer != "human") {
    throw UsageError("--layer must be machine or human");
  }
  if (o.layer == "human" && o.enh.empty()) {
    throw UsageError("--layer human requires --enh");
  }
  const auto bytes = read_file(o.in);
  const BaseModel base = load_base_checkpoint(o.base);
  if (o.layer == "machine") {
    write_image(decode_machine(bytes, base), o.out);
  } else {
    const EnhancementModel enh = load_enhancement_checkpoint(o.enh);
    write_image(decode_human(bytes, base, enh), o.out);
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto images = load_images(o.in);
  const BaseModel base = load_base_checkpoint(o.base);
  std::vector<ImageMetrics> metrics;
  RDPoint point;
  if (o.enh.empty()) {
    point = evaluate(images, base, nullptr, &metrics);
  } else {
    const EnhancementModel enh = load_enhancement_checkpoint(o.enh);
    point = evaluate(images, base, &enh, &metrics);
  }
  write_rd_csv({point}, o.csv);
  if (!o.jsonl.empty()) write_metrics_jsonl(metrics, o.jsonl);
  out << format_rd_csv({point});
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const SweepGrid grid = load_sweep_grid(o.grid);
  const auto images = load_images(grid.test_dir);
  std::vector<DcComparisonRow> dc_rows;
  const auto points =
      rd_sweep(grid.runs, images, o.dc_csv.empty() ? nullptr : &dc_rows);
  write_rd_csv(points, o.csv);
  if (!o.dc_csv.empty()) {
    write_dc_csv(dc_rows, o.dc_csv);
    warn_if_dc_wins(dc_rows, err);
  }
  out << format_rd_csv(points);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Scalable image codec for machines and humans", "sicm"};
  app.require_subcommand(1);
  Options o;

  auto* mask = app.add_subcommand("mask", "Derive edge masks for a folder");
  mask->add_option("--in", o.in, "Image directory")->required();
  mask->add_option("--out", o.out, "Mask output directory")->required();
  mask->add_option("--dilate", o.dilate, "Dilation radius")
      ->check(CLI::NonNegativeNumber);

  auto* train_base_cmd =
      app.add_subcommand("train-base", "Train the machine-layer model");
  train_base_cmd->add_option("--config", o.config, "Training config")
      ->required();
  train_base_cmd->add_option("--out", o.out, "Checkpoint to write")
      ->required();
  train_base_cmd->add_option("--objective", o.objective,
                             "masked (machine layer) or plain (ordinary "
                             "codec, e.g. a residual codec)");

  auto* train_enh_cmd =
      app.add_subcommand("train-enh", "Train the enhancement model");
  train_enh_cmd->add_option("--config", o.config, "Training config")
      ->required();
  train_enh_cmd->add_option("--base", o.base, "Frozen base checkpoint")
      ->required();
  train_enh_cmd->add_option("--out", o.out, "Checkpoint to write")
      ->required();

  auto* encode = app.add_subcommand("encode", "Encode an image");
  encode->add_option("--in", o.in, "Input image")->required();
  encode->add_option("--base", o.base, "Base checkpoint")->required();
  encode->add_option("--enh", o.enh, "Enhancement checkpoint");
  encode->add_option("--out", o.out, "Output container")->required();

  auto* decode = app.add_subcommand("decode", "Decode one layer");
  decode->add_option("--in", o.in, "Input container")->required();
  decode->add_option("--base", o.base, "Base checkpoint")->required();
  decode->add_option("--enh", o.enh, "Enhancement checkpoint");
  decode->add_option("--layer", o.layer, "machine or human");
  decode->add_option("--out", o.out, "Output image")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint pair");
  eval->add_option("--in", o.in, "Test image directory")->required();
  eval->add_option("--base", o.base, "Base checkpoint")->required();
  eval->add_option("--enh", o.enh, "Enhancement checkpoint");
  eval->add_option("--csv", o.csv, "RD CSV to write")->required();
  eval->add_option("--jsonl", o.jsonl, "Per-image metrics (JSON lines)");

  auto* sweep = app.add_subcommand("sweep", "Evaluate a grid of checkpoints");
  sweep->add_option("--grid", o.grid, "Grid file")->required();
  sweep->add_option("--csv", o.csv, "RD CSV to write")->required();
  sweep->add_option("--dc-csv", o.dc_csv,
                    "Difference-compression comparison CSV to write");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (mask->parsed()) return cmd_mask(o, out);
    if (train_base_cmd->parsed()) return cmd_train_base(o, out);
    if (train_enh_cmd->parsed()) return cmd_train_enh(o, out);
    if (encode->parsed()) return cmd_encode(o, out);
    if (decode->parsed()) return cmd_decode(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace sicm::cli
