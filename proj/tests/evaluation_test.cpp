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

#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sicm/bitstream.hpp"
#include "sicm/checkpoint.hpp"
#include "sicm/codec.hpp"
#include "sicm/error.hpp"
#include "sicm/image_io.hpp"
#include "sicm/synthetic.hpp"
#include "test_util.hpp"

namespace sicm {
namespace {

TEST(Psnr, ReferenceValues) {
  const Tensor x = testing::random_tensor(3, 4, 4, 1, 0.2, 0.8);
  EXPECT_EQ(psnr(x, x), kPsnrCap);
  EXPECT_DOUBLE_EQ(psnr(Tensor(3, 2, 2, 0.0), Tensor(3, 2, 2, 1.0)), 0.0);
  Tensor shifted = x;
  for (double& v : shifted.values()) v += 0.1;
  EXPECT_NEAR(psnr(x, shifted), 20.0, 1e-9);
  EXPECT_THROW(psnr(Tensor(3, 2, 2), Tensor(3, 2, 3)), ShapeError);
}

ScalableBitstream stream_with(std::size_t base_payload, std::size_t enh_payload) {
  ScalableBitstream s;
  s.width = 256;
  s.height = 256;
  s.n = 5;
  s.y.assign(base_payload, 7);
  if (enh_payload > 0) {
    s.flags = kFlagEnhancement;
    s.m = 1;
    s.ya.assign(enh_payload, 9);
  }
  return s;
}

TEST(Bpp, CountsEveryContainerByte) {
  // 21-byte header + two 4-byte section lengths + payload = 4096 bytes.
  const auto bytes = serialize_bitstream(stream_with(4096 - 29, 0));
  ASSERT_EQ(bytes.size(), 4096u);
  const Bpp b = bpp(bytes, 256, 256);
  EXPECT_DOUBLE_EQ(b.base, 0.5);
  EXPECT_EQ(b.enh, 0.0);
  EXPECT_DOUBLE_EQ(bpp(bytes, 512, 256).total(), 0.25);
}

TEST(Bpp, SplitsLayers) {
  const auto bytes = serialize_bitstream(stream_with(100, 200));
  const Bpp b = bpp(bytes, 16, 16);
  EXPECT_DOUBLE_EQ(b.base, 8.0 * (21 + 8 + 100) / 256.0);
  EXPECT_DOUBLE_EQ(b.enh, 8.0 * (8 + 200) / 256.0);
}

TEST(RdCsv, WriteReadWriteIsAFixedPoint) {
  std::vector<RDPoint> points;
  for (int i = 0; i < 5; ++i) {
    RDPoint p;
    p.lambda = kLambdaTable[i];
    p.m = i + 1;
    p.bpp_base = 0.1 + i / 3.0;
    p.bpp_enh = 0.07 * i + 1e-17;
    p.bpp_total = p.bpp_base + p.bpp_enh;
    p.psnr_machine = 21.0 + i / 7.0;
    p.psnr_human = 25.0 + i / 9.0;
    p.count = 24;
    points.push_back(p);
  }
  const std::string text = format_rd_csv(points);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "lambda,m,bpp_base,bpp_enh,bpp_total,psnr_machine,psnr_human,count");
  const auto back = parse_rd_csv(text);
  EXPECT_EQ(back, points);
  EXPECT_EQ(format_rd_csv(back), text);
  EXPECT_THROW(parse_rd_csv("lambda,m\n"), FormatError);
  EXPECT_THROW(parse_rd_csv(std::string(kRdCsvHeader) + "\n1,2,3\n"),
               FormatError);
}

TEST(ResidualShift, RoundTripsOnUnitRange) {
  Tensor r(1, 1, 5);
  const double v[] = {-1.0, -0.25, 0.0, 0.5, 1.0};
  for (int i = 0; i < 5; ++i) r[i] = v[i];
  const Tensor s = shift_residual(r);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[2], 0.5);
  EXPECT_EQ(s[4], 1.0);
  EXPECT_TRUE(bit_equal(unshift_residual(s), r));
}

class EvaluationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    base = BaseModel(testing::tiny_config());
    base.initialize();
    for (int i = 0; i < 3; ++i) {
      images.push_back({"img" + std::to_string(i), synthetic_scene(12, 16, 30 + i)});
    }
  }
  EnhancementModel make_enh(int m, std::uint64_t seed) const {
    ModelConfig c = testing::tiny_config();
    c.enh_group_count = m;
    c.seed = seed;
    c.lambda = 0.05;
    EnhancementModel enh(c);
    enh.initialize();
    enh.base_hash = model_hash(base);
    return enh;
  }
  BaseModel base;
  std::vector<NamedImage> images;
};

TEST_F(EvaluationTest, PointSatisfiesArithmeticIdentity) {
  const EnhancementModel enh = make_enh(2, 1);
  std::vector<ImageMetrics> per_image;
  const RDPoint p = evaluate(images, base, &enh, &per_image);
  EXPECT_EQ(p.count, 3);
  EXPECT_EQ(p.m, 2);
  EXPECT_EQ(p.lambda, 0.05);
  EXPECT_EQ(p.bpp_total, p.bpp_base + p.bpp_enh);
  EXPECT_GT(p.bpp_enh, 0.0);
  ASSERT_EQ(per_image.size(), 3u);
  double mean = 0.0;
  for (const auto& m : per_image) mean += m.psnr_machine / 3.0;
  EXPECT_NEAR(p.psnr_machine, mean, 1e-12);
}

TEST_F(EvaluationTest, WithoutEnhancementHumanEqualsMachine) {
  const RDPoint p = evaluate(images, base);
  EXPECT_EQ(p.bpp_enh, 0.0);
  EXPECT_EQ(p.m, 0);
  EXPECT_EQ(p.psnr_human, p.psnr_machine);
}

TEST_F(EvaluationTest, MachinePsnrIndependentOfEnhancementModel) {
  const EnhancementModel a = make_enh(1, 1), b = make_enh(2, 9);
  EXPECT_EQ(evaluate(images, base, &a).psnr_machine,
            evaluate(images, base, &b).psnr_machine);
}

TEST_F(EvaluationTest, JsonLinesDump) {
  std::vector<ImageMetrics> per_image;
  evaluate(images, base, nullptr, &per_image);
  const auto dir = testing::scratch_dir("jsonl");
  write_metrics_jsonl(per_image, dir / "m.jsonl");
  std::ifstream in(dir / "m.jsonl");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_NE(line.find("\"name\":\"img" + std::to_string(rows) + "\""),
              std::string::npos);
    EXPECT_NE(line.find("\"psnr_human\""), std::string::npos);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(EvaluationTest, SweepOverGridGivesOneRowPerCell) {
  const auto dir = testing::scratch_dir("sweep");
  save_checkpoint(base, dir / "base.ckpt");
  std::vector<SweepEntry> entries;
  for (int m = 1; m <= 2; ++m) {
    const auto path = dir / ("enh" + std::to_string(m) + ".ckpt");
    save_checkpoint(make_enh(m, m), path);
    entries.push_back({dir / "base.ckpt", path, {}});
  }
  const auto points = rd_sweep(entries, images);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].m, 1);
  EXPECT_EQ(points[1].m, 2);
  EXPECT_EQ(points[0].psnr_machine, points[1].psnr_machine);
  entries.push_back({dir / "base.ckpt", dir / "missing.ckpt", {}});
  EXPECT_THROW(rd_sweep(entries, images), IoError);
}

TEST_F(EvaluationTest, GridFileResolvesRelativePaths) {
  const auto dir = testing::scratch_dir("grid");
  std::ofstream(dir / "grid.txt") << "test = images\n"
                                  << "run = b.ckpt e1.ckpt\n"
                                  << "run = /abs/b.ckpt e2.ckpt r.ckpt\n";
  const SweepGrid grid = load_sweep_grid(dir / "grid.txt");
  EXPECT_EQ(grid.test_dir, dir / "images");
  ASSERT_EQ(grid.runs.size(), 2u);
  EXPECT_EQ(grid.runs[0].enh, dir / "e1.ckpt");
  EXPECT_TRUE(grid.runs[0].residual.empty());
  EXPECT_EQ(grid.runs[1].base, "/abs/b.ckpt");
  EXPECT_EQ(grid.runs[1].residual, dir / "r.ckpt");
}

TEST_F(EvaluationTest, DcBaselineAddsDecodedResidual) {
  BaseModel residual(testing::tiny_config());
  residual.initialize();
  const DcResult dc = dc_baseline(images[0].image, base, residual);
  const Tensor x_t = decode_machine(dc.base_stream, base);
  const Tensor r =
      unshift_residual(decode_machine(dc.residual_stream, residual));
  for (std::size_t i = 0; i < x_t.size(); ++i) {
    EXPECT_EQ(dc.x_hat[i], std::clamp(x_t[i] + r[i], 0.0, 1.0));
  }
  EXPECT_GT(dc.bpp_residual, 0.0);
}

TEST_F(EvaluationTest, DcComparisonRowAndWarning) {
  BaseModel residual(testing::tiny_config());
  residual.initialize();
  const EnhancementModel enh = make_enh(2, 3);
  const DcComparisonRow row = dc_compare(images, base, enh, residual);
  EXPECT_EQ(row.count, 3);
  EXPECT_EQ(row.lambda, 0.05);
  const auto dir = testing::scratch_dir("dc");
  write_dc_csv({row}, dir / "dc.csv");
  std::ifstream in(dir / "dc.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kDcCsvHeader);
  DcComparisonRow losing = row;
  losing.fusion_psnr = losing.dc_psnr - 1.0;
  std::ostringstream log;
  EXPECT_EQ(warn_if_dc_wins({losing}, log), 1);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
}

TEST(EnhParams, StrictlyIncreasingInM) {
  ModelConfig c;  // C = 320, n = 5
  std::size_t previous = 0;
  for (int m = 1; m <= 5; ++m) {
    c.enh_group_count = m;
    EXPECT_EQ(c.enh_channels(), 64 * m);
    const std::size_t count = count_enh_params(c);
    EXPECT_GT(count, previous);
    previous = count;
  }
  c.enh_group_count = 0;
  EXPECT_THROW(count_enh_params(c), ConfigError);
}

}  // namespace
}  // namespace sicm
