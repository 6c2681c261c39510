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

#ifndef SICM_EVALUATION_HPP_
#define SICM_EVALUATION_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sicm/model.hpp"
#include "sicm/model_config.hpp"
#include "sicm/tensor.hpp"

namespace sicm {

inline constexpr double kPsnrCap = 100.0;

// 10·log10(1/mse) on [0,1] images, capped at kPsnrCap.
double psnr(const Tensor& x, const Tensor& x_hat);

struct Bpp {
  double base = 0.0;
  double enh = 0.0;
  double total() const { return base + enh; }
};

// Bits per pixel of a serialized container; the header and section length
// fields are charged to the layer they belong to.
Bpp bpp(std::span<const std::uint8_t> bytes, int width, int height);

struct RDPoint {
  double lambda = 0.0;
  int m = 0;
  double bpp_base = 0.0;
  double bpp_enh = 0.0;
  double bpp_total = 0.0;
  double psnr_machine = 0.0;
  double psnr_human = 0.0;
  int count = 0;
  friend bool operator==(const RDPoint&, const RDPoint&) = default;
};

struct NamedImage {
  std::string name;
  Tensor image;
};

std::vector<NamedImage> load_images(const std::filesystem::path& dir);

struct ImageMetrics {
  std::string name;
  double bpp_base = 0.0;
  double bpp_enh = 0.0;
  double psnr_machine = 0.0;
  double psnr_human = 0.0;
};

// Encodes and decodes every image. Without `enh`, bpp_enh is 0 and
// psnr_human equals psnr_machine (the machine layer is the only output).
// The RD point's lambda is the enhancement model's when present.
RDPoint evaluate(const std::vector<NamedImage>& images, const BaseModel& base,
                 const EnhancementModel* enh = nullptr,
                 std::vector<ImageMetrics>* per_image = nullptr);

// One JSON object per line: name, bpp_base, bpp_enh, bpp_total,
// psnr_machine, psnr_human.
void write_metrics_jsonl(const std::vector<ImageMetrics>& metrics,
                         const std::filesystem::path& path);

extern const char* const kRdCsvHeader;
std::string format_rd_csv(const std::vector<RDPoint>& points);
std::vector<RDPoint> parse_rd_csv(const std::string& text);
void write_rd_csv(const std::vector<RDPoint>& points,
                  const std::filesystem::path& path);
std::vector<RDPoint> read_rd_csv(const std::filesystem::path& path);

// Sweep grid file (key-value text):
//   test = DIR
//   run = BASE_CKPT ENH_CKPT [RESIDUAL_CKPT]   (repeated; one per cell)
// The optional third checkpoint is a residual codec for the
// difference-compression comparison at that cell.
// Relative paths resolve against the grid file's directory.
struct DcComparisonRow;

struct SweepEntry {
  std::filesystem::path base;
  std::filesystem::path enh;
  std::filesystem::path residual;  // optional
};
struct SweepGrid {
  std::filesystem::path test_dir;
  std::vector<SweepEntry> runs;
};
SweepGrid load_sweep_grid(const std::filesystem::path& path);

// One RD point per entry; throws IoError for a missing checkpoint. When
// `dc_rows` is given, entries with a residual codec also produce a
// difference-compression comparison row.
std::vector<RDPoint> rd_sweep(const std::vector<SweepEntry>& entries,
                              const std::vector<NamedImage>& images,
                              std::vector<DcComparisonRow>* dc_rows = nullptr);

// Trainable parameter count of the enhancement model for `config`.
std::size_t count_enh_params(const ModelConfig& config);

// --- Difference-compression baseline ---

// Maps a residual in [-1,1] to [0,1] and back.
Tensor shift_residual(const Tensor& residual);
Tensor unshift_residual(const Tensor& shifted);

// Shifted residuals x − x̂_t of the base machine layer, used as the training
// set of the residual codec.
std::vector<Tensor> make_residual_images(const std::vector<Tensor>& images,
                                         const BaseModel& base);

struct DcResult {
  std::vector<std::uint8_t> base_stream;
  std::vector<std::uint8_t> residual_stream;
  Tensor x_hat;  // clamp(x̂_t + decoded residual)
  double bpp_base = 0.0;
  double bpp_residual = 0.0;
};

DcResult dc_baseline(const Tensor& x, const BaseModel& base,
                     const BaseModel& residual_codec);

struct DcComparisonRow {
  double lambda = 0.0;
  int m = 0;
  double fusion_bpp_total = 0.0;
  double fusion_psnr = 0.0;
  double dc_bpp_total = 0.0;
  double dc_psnr = 0.0;
  int count = 0;
  // Fusion is at least as good on both axes (no more bits, no lower PSNR).
  // Informational only.
  bool fusion_dominates() const {
    return fusion_bpp_total <= dc_bpp_total && fusion_psnr >= dc_psnr;
  }
};

DcComparisonRow dc_compare(const std::vector<NamedImage>& images,
                           const BaseModel& base, const EnhancementModel& enh,
                           const BaseModel& residual_codec);

extern const char* const kDcCsvHeader;
void write_dc_csv(const std::vector<DcComparisonRow>& rows,
                  const std::filesystem::path& path);

// Writes a warning line to `log` for each row where fusion does not
// dominate; returns the number of such rows.
int warn_if_dc_wins(const std::vector<DcComparisonRow>& rows,
                    std::ostream& log);

}  // namespace sicm

#endif  // SICM_EVALUATION_HPP_
