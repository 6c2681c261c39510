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

#include "sicm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "sicm/bitstream.hpp"
#include "sicm/checkpoint.hpp"
#include "sicm/codec.hpp"
#include "sicm/error.hpp"
#include "sicm/image_io.hpp"
#include "sicm/kv_config.hpp"
#include "sicm/losses.hpp"

namespace sicm {

const char* const kRdCsvHeader =
    "lambda,m,bpp_base,bpp_enh,bpp_total,psnr_machine,psnr_human,count";
const char* const kDcCsvHeader =
    "lambda,m,fusion_bpp_total,fusion_psnr,dc_bpp_total,dc_psnr,count";

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

double psnr(const Tensor& x, const Tensor& x_hat) {
  const double err = mse(x, x_hat);  // throws ShapeError on mismatch
  if (err <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / err));
}

Bpp bpp(std::span<const std::uint8_t> bytes, int width, int height) {
  if (width <= 0 || height <= 0) throw ShapeError("bpp: empty image");
  const SectionSizes sizes = section_sizes(bytes);
  const double pixels = static_cast<double>(width) * height;
  return {8.0 * static_cast<double>(sizes.base_bytes) / pixels,
          8.0 * static_cast<double>(sizes.enhancement_bytes) / pixels};
}

std::vector<NamedImage> load_images(const std::filesystem::path& dir) {
  std::vector<NamedImage> out;
  for (const auto& path : list_images(dir)) {
    out.push_back({path.filename().string(), read_image(path)});
  }
  if (out.empty()) throw IoError("no images found in " + dir.string());
  return out;
}

RDPoint evaluate(const std::vector<NamedImage>& images, const BaseModel& base,
                 const EnhancementModel* enh,
                 std::vector<ImageMetrics>* per_image) {
  if (images.empty()) throw ShapeError("evaluate: no images");
  RDPoint point;
  point.lambda = enh != nullptr ? enh->config.lambda : base.config.lambda;
  point.m = enh != nullptr ? enh->config.enh_group_count : 0;
  for (const NamedImage& item : images) {
    const auto bytes = serialize_bitstream(encode_image(item.image, base, enh));
    const Bpp rate = bpp(bytes, item.image.width(), item.image.height());
    ImageMetrics metrics{item.name, rate.base, rate.enh, 0.0, 0.0};
    metrics.psnr_machine = psnr(item.image, decode_machine(bytes, base));
    metrics.psnr_human = enh != nullptr
                             ? psnr(item.image, decode_human(bytes, base, *enh))
                             : metrics.psnr_machine;
    point.bpp_base += metrics.bpp_base;
    point.bpp_enh += metrics.bpp_enh;
    point.psnr_machine += metrics.psnr_machine;
    point.psnr_human += metrics.psnr_human;
    if (per_image != nullptr) per_image->push_back(std::move(metrics));
  }
  const double count = static_cast<double>(images.size());
  point.count = static_cast<int>(images.size());
  point.bpp_base /= count;
  point.bpp_enh /= count;
  point.bpp_total = point.bpp_base + point.bpp_enh;
  point.psnr_machine /= count;
  point.psnr_human /= count;
  return point;
}

void write_metrics_jsonl(const std::vector<ImageMetrics>& metrics,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const ImageMetrics& m : metrics) {
    const nlohmann::json row = {{"name", m.name},
                                {"bpp_base", m.bpp_base},
                                {"bpp_enh", m.bpp_enh},
                                {"bpp_total", m.bpp_base + m.bpp_enh},
                                {"psnr_machine", m.psnr_machine},
                                {"psnr_human", m.psnr_human}};
    out << row.dump() << '\n';
  }
}

std::string format_rd_csv(const std::vector<RDPoint>& points) {
  std::string out = std::string(kRdCsvHeader) + "\n";
  for (const RDPoint& p : points) {
    out += format_double(p.lambda) + ',' + std::to_string(p.m) + ',' +
           format_double(p.bpp_base) + ',' + format_double(p.bpp_enh) + ',' +
           format_double(p.bpp_total) + ',' + format_double(p.psnr_machine) +
           ',' + format_double(p.psnr_human) + ',' + std::to_string(p.count) +
           '\n';
  }
  return out;
}

std::vector<RDPoint> parse_rd_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kRdCsvHeader) {
    throw FormatError("RD CSV: unexpected header");
  }
  std::vector<RDPoint> points;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw FormatError("RD CSV: expected 8 fields: " + line);
    RDPoint p;
    p.lambda = parse_double(f[0]);
    p.m = parse_int(f[1]);
    p.bpp_base = parse_double(f[2]);
    p.bpp_enh = parse_double(f[3]);
    p.bpp_total = parse_double(f[4]);
    p.psnr_machine = parse_double(f[5]);
    p.psnr_human = parse_double(f[6]);
    p.count = parse_int(f[7]);
    points.push_back(p);
  }
  return points;
}

void write_rd_csv(const std::vector<RDPoint>& points,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_rd_csv(points);
}

std::vector<RDPoint> read_rd_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_rd_csv(text.str());
}

SweepGrid load_sweep_grid(const std::filesystem::path& path) {
  const KeyValueConfig kv = KeyValueConfig::load(path);
  const auto dir = path.parent_path();
  auto resolve = [&dir](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_relative() ? dir / fp : fp;
  };
  SweepGrid grid;
  grid.test_dir = resolve(kv.get("test"));
  for (const std::string& run : kv.get_all("run")) {
    std::istringstream in(run);
    std::string base_path, enh_path, residual_path, extra;
    const bool ok = static_cast<bool>(in >> base_path >> enh_path);
    if (!ok || ((in >> residual_path) && (in >> extra))) {
      throw ConfigError(
          "sweep grid: run needs 'BASE_CKPT ENH_CKPT [RESIDUAL_CKPT]': " + run);
    }
    grid.runs.push_back({resolve(base_path), resolve(enh_path),
                         residual_path.empty() ? std::filesystem::path()
                                               : resolve(residual_path)});
  }
  if (grid.runs.empty()) throw ConfigError("sweep grid: no run entries");
  return grid;
}

std::vector<RDPoint> rd_sweep(const std::vector<SweepEntry>& entries,
                              const std::vector<NamedImage>& images,
                              std::vector<DcComparisonRow>* dc_rows) {
  for (const SweepEntry& e : entries) {
    for (const auto& p : {e.base, e.enh, e.residual}) {
      if (!p.empty() && !std::filesystem::exists(p)) {
        throw IoError("missing checkpoint " + p.string());
      }
    }
  }
  std::vector<RDPoint> points;
  for (const SweepEntry& e : entries) {
    const BaseModel base = load_base_checkpoint(e.base);
    const EnhancementModel enh = load_enhancement_checkpoint(e.enh);
    points.push_back(evaluate(images, base, &enh));
    if (dc_rows != nullptr && !e.residual.empty()) {
      dc_rows->push_back(
          dc_compare(images, base, enh, load_base_checkpoint(e.residual)));
    }
  }
  return points;
}

std::size_t count_enh_params(const ModelConfig& config) {
  return count_parameters(EnhancementModel(config));
}

Tensor shift_residual(const Tensor& residual) {
  Tensor out = residual;
  for (double& v : out.values()) v = (v + 1.0) * 0.5;
  return out;
}

Tensor unshift_residual(const Tensor& shifted) {
  Tensor out = shifted;
  for (double& v : out.values()) v = 2.0 * v - 1.0;
  return out;
}

namespace {

Tensor machine_reconstruction(const Tensor& x, const BaseModel& base) {
  return decode_machine(serialize_bitstream(encode_image(x, base)), base);
}

Tensor difference(const Tensor& a, const Tensor& b) {
  Tensor out = a;
  auto dst = out.values();
  auto src = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  return out;
}

}  // namespace

std::vector<Tensor> make_residual_images(const std::vector<Tensor>& images,
                                         const BaseModel& base) {
  std::vector<Tensor> out;
  out.reserve(images.size());
  for (const Tensor& x : images) {
    out.push_back(
        shift_residual(difference(x, machine_reconstruction(x, base))));
  }
  return out;
}

DcResult dc_baseline(const Tensor& x, const BaseModel& base,
                     const BaseModel& residual_codec) {
  DcResult r;
  r.base_stream = serialize_bitstream(encode_image(x, base));
  const Tensor x_t = decode_machine(r.base_stream, base);
  const Tensor shifted = shift_residual(difference(x, x_t));
  r.residual_stream = serialize_bitstream(encode_image(shifted, residual_codec));
  const Tensor residual =
      unshift_residual(decode_machine(r.residual_stream, residual_codec));
  r.x_hat = x_t;
  r.x_hat += residual;
  for (double& v : r.x_hat.values()) v = std::clamp(v, 0.0, 1.0);
  r.bpp_base = bpp(r.base_stream, x.width(), x.height()).total();
  r.bpp_residual = bpp(r.residual_stream, x.width(), x.height()).total();
  return r;
}

DcComparisonRow dc_compare(const std::vector<NamedImage>& images,
                           const BaseModel& base, const EnhancementModel& enh,
                           const BaseModel& residual_codec) {
  if (images.empty()) throw ShapeError("dc_compare: no images");
  const RDPoint fusion = evaluate(images, base, &enh);
  DcComparisonRow row;
  row.lambda = enh.config.lambda;
  row.m = enh.config.enh_group_count;
  row.fusion_bpp_total = fusion.bpp_total;
  row.fusion_psnr = fusion.psnr_human;
  for (const NamedImage& item : images) {
    const DcResult dc = dc_baseline(item.image, base, residual_codec);
    row.dc_bpp_total += dc.bpp_base + dc.bpp_residual;
    row.dc_psnr += psnr(item.image, dc.x_hat);
  }
  row.count = static_cast<int>(images.size());
  row.dc_bpp_total /= row.count;
  row.dc_psnr /= row.count;
  return row;
}

void write_dc_csv(const std::vector<DcComparisonRow>& rows,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << kDcCsvHeader << '\n';
  for (const DcComparisonRow& r : rows) {
    out << format_double(r.lambda) << ',' << r.m << ','
        << format_double(r.fusion_bpp_total) << ','
        << format_double(r.fusion_psnr) << ',' << format_double(r.dc_bpp_total)
        << ',' << format_double(r.dc_psnr) << ',' << r.count << '\n';
  }
}

int warn_if_dc_wins(const std::vector<DcComparisonRow>& rows,
                    std::ostream& log) {
  int count = 0;
  for (const DcComparisonRow& r : rows) {
    if (r.fusion_dominates()) continue;
    ++count;
    log << "warning: at lambda=" << format_double(r.lambda) << " m=" << r.m
        << " fusion (" << format_double(r.fusion_bpp_total) << " bpp, "
        << format_double(r.fusion_psnr) << " dB) does not dominate DC ("
        << format_double(r.dc_bpp_total) << " bpp, "
        << format_double(r.dc_psnr) << " dB)\n";
  }
  return count;
}

}  // namespace sicm
