/* Copyright 2026 The APE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "ape/error.hpp"
#include "ape/exit_engine.hpp"
#include "ape/image_io.hpp"
#include "ape/kernels.hpp"
#include "ape/metrics.hpp"
#include "ape/resample.hpp"
#include "test_util.hpp"

namespace ape {
namespace {

using testing::uniform;

// Untrained tiny model with a random regressor so exits spread out.
MultiExitSR spread_model(std::uint64_t seed) {
  MultiExitSR m = MultiExitSR::build(BackboneConfig::tiny(), seed);
  m.find("regressor.weight")->var.mutable_value() = uniform<float>({1, 16}, seed + 100, -0.3, 0.3);
  m.find("regressor.bias")->var.mutable_value()[0] = 0.3f;
  return m;
}

InferenceOptions small_patches(std::size_t parallel = 16) {
  InferenceOptions o;
  o.patch_size = 12;
  o.stride = 10;
  o.parallel_size = parallel;
  return o;
}

Tensor<float> test_image(std::uint64_t seed, std::size_t h = 40, std::size_t w = 52) {
  // Noise amplitude grows left to right over a vertical ramp, so patches differ.
  Tensor<float> img = uniform<float>({3, h, w}, seed, 0.0, 1.0);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        float& v = img[(c * h + y) * w + x];
        v = v * static_cast<float>(x) / static_cast<float>(w) + 0.5f * static_cast<float>(y) / static_cast<float>(h);
      }
  return img;
}

TEST(Policy, Validation) {
  ExitPolicy p;
  p.threshold = 1.01;
  EXPECT_THROW(p.validate(), ConfigError);
  p.threshold = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(p.validate(), ConfigError);
  p.threshold = -1.0;
  EXPECT_NO_THROW(p.validate());
  EXPECT_FALSE(p.retires(-1.0f));
  p.threshold = 1.0;
  EXPECT_TRUE(p.retires(1.0f));
  p.threshold = 0.0;
  EXPECT_TRUE(p.retires(-0.01f));
  EXPECT_FALSE(p.retires(0.0f));
  p.source = SignalSource::kAbsolutePerformance;
  EXPECT_TRUE(p.retires(0.0f));
  EXPECT_FALSE(p.retires(-0.01f));
  EXPECT_THROW(parse_signal_source("magic"), ConfigError);
  EXPECT_EQ(parse_exit_output("current"), ExitOutput::kCurrentFeature);
}

TEST(Engine, FloorThresholdEqualsFullDepthForward) {
  const MultiExitSR m = spread_model(1);
  const auto lr = test_image(2);
  ExitPolicy p;
  p.threshold = -1.0;
  const SrResult r = super_resolve(m, lr, p, small_patches());
  ASSERT_EQ(r.patches.size(), r.grid.size());
  auto [grid, patches] = split(lr, 12, 10);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto full = m.forward_full(patches[i].reshaped({1, 3, 12, 12}));
    EXPECT_TRUE(r.patches[i] == full.reshaped({3, 24, 24})) << "patch " << i;
    EXPECT_EQ(r.trace.patches[i].exit_index, 4);
    EXPECT_EQ(r.trace.patches[i].signals.size(), 4u);
  }
  EXPECT_EQ(r.trace.mean_exit_depth(), 4.0);
  EXPECT_EQ(r.image.shape(), (Shape{3, 80, 104}));
}

TEST(Engine, CeilingThresholdExitsEverythingAtTheFirstExit) {
  const MultiExitSR m = spread_model(1);
  const auto lr = test_image(3);
  ExitPolicy p;
  p.threshold = 1.0;
  const SrResult r = super_resolve(m, lr, p, small_patches());
  EXPECT_EQ(r.trace.mean_exit_depth(), 1.0);
  const auto hist = r.trace.histogram();
  EXPECT_EQ(hist[1], r.grid.size());
  // Previous-feature output: the head feature goes straight to the tail.
  auto [grid, patches] = split(lr, 12, 10);
  const ExitState s = m.begin(patches[0].reshaped({1, 3, 12, 12}));
  EXPECT_TRUE(r.patches[0] == m.tail(s.feature).reshaped({3, 24, 24}));
}

TEST(Engine, CurrentFeatureOutputSwitch) {
  const MultiExitSR m = spread_model(1);
  const auto lr = test_image(3);
  ExitPolicy p;
  p.threshold = 1.0;
  p.output = ExitOutput::kCurrentFeature;
  const SrResult r = super_resolve(m, lr, p, small_patches());
  auto [grid, patches] = split(lr, 12, 10);
  const ExitState s = m.forward_step(m.begin(patches[0].reshaped({1, 3, 12, 12}))).state;
  EXPECT_TRUE(r.patches[0] == m.tail(s.feature).reshaped({3, 24, 24}));
}

TEST(Engine, TraceAccountingMatchesCostModel) {
  const MultiExitSR m = spread_model(5);
  ExitPolicy p;
  p.threshold = 0.0;
  const SrResult r = super_resolve(m, test_image(6), p, small_patches());
  const CostModel cost(m.config(), 12, 12);
  std::uint64_t total = 0;
  std::size_t count = 0;
  const auto hist = r.trace.histogram();
  for (const auto& t : r.trace.patches) {
    EXPECT_EQ(t.macs, mac_count(m.config(), 12, 12, t.exit_index).total());
    EXPECT_EQ(t.signals.size(), static_cast<std::size_t>(t.exit_index));
    // Every visited exit but the last was above the threshold.
    for (std::size_t j = 0; j + 1 < t.signals.size(); ++j) EXPECT_GE(t.signals[j], 0.0f);
    if (t.exit_index < 4) EXPECT_LT(t.signals.back(), 0.0f);
    total += t.macs;
  }
  for (std::size_t n : hist) count += n;
  EXPECT_EQ(count, r.grid.size());
  EXPECT_EQ(hist[0], 0u);
  EXPECT_EQ(total, r.trace.total_macs());
  EXPECT_EQ(cost.at_exit(4).total(), mac_count(m.config(), 12, 12, 4).total());
}

TEST(Engine, PerPatchMonotoneInThreshold) {
  const MultiExitSR m = spread_model(7);
  const auto lr = test_image(8);
  std::vector<ExitTrace> traces;
  std::uint64_t prev_macs = std::numeric_limits<std::uint64_t>::max();
  for (double t = -1.0; t <= 1.0001; t += 0.125) {
    ExitPolicy p;
    p.threshold = std::min(t, 1.0);
    const SrResult r = super_resolve(m, lr, p, small_patches());
    EXPECT_LE(r.trace.total_macs(), prev_macs);
    prev_macs = r.trace.total_macs();
    traces.push_back(r.trace);
  }
  std::set<int> seen;
  for (std::size_t k = 1; k < traces.size(); ++k)
    for (std::size_t i = 0; i < traces[k].patches.size(); ++i) {
      EXPECT_LE(traces[k].patches[i].exit_index, traces[k - 1].patches[i].exit_index);
      seen.insert(traces[k].patches[i].exit_index);
    }
  EXPECT_GE(seen.size(), 3u);
}

TEST(Engine, ParallelSizeDoesNotChangeResults) {
  const MultiExitSR m = spread_model(9);
  const auto lr = test_image(10);
  ExitPolicy p;
  p.threshold = 0.0;
  const SrResult ref = super_resolve(m, lr, p, small_patches(1));
  for (std::size_t b : {2u, 4u, 7u, 16u, 64u}) {
    const SrResult r = super_resolve(m, lr, p, small_patches(b));
    EXPECT_TRUE(r.image == ref.image) << b;
    for (std::size_t i = 0; i < ref.patches.size(); ++i) {
      EXPECT_TRUE(r.patches[i] == ref.patches[i]);
      EXPECT_EQ(r.trace.patches[i].exit_index, ref.trace.patches[i].exit_index);
      EXPECT_EQ(r.trace.patches[i].signals, ref.trace.patches[i].signals);
      EXPECT_EQ(r.trace.patches[i].macs, ref.trace.patches[i].macs);
    }
  }
}

TEST(Engine, OracleMatchesBruteForceEnumeration) {
  const MultiExitSR m = spread_model(11);
  const auto hr = test_image(12, 80, 104);
  const auto lr = bicubic_downsample(hr, 2);
  ExitPolicy p;
  p.threshold = 0.0;
  p.source = SignalSource::kOracle;
  const SrResult r = super_resolve(m, lr, p, small_patches(), &hr);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const auto c = r.grid.coords[i];
    const auto x = crop(lr, c.top, c.left, 12, 12).reshaped({1, 3, 12, 12});
    const auto y = crop(hr, 2 * c.top, 2 * c.left, 24, 24);
    ExitState s = m.begin(x);
    double prev = psnr(m.tail(s.feature).reshaped({3, 24, 24}), y);
    int expected = 4;
    for (int j = 1; j <= 4; ++j) {
      s = m.forward_step(s).state;
      const double cur = psnr(m.tail(s.feature).reshaped({3, 24, 24}), y);
      if (std::tanh(cur - prev) < 0.0) {
        expected = j;
        break;
      }
      prev = cur;
    }
    EXPECT_EQ(r.trace.patches[i].exit_index, expected) << "patch " << i;
  }
  EXPECT_THROW(super_resolve(m, lr, p, small_patches()), ConfigError);
}

TEST(Engine, RejectsBadInputs) {
  MultiExitSR m = spread_model(1);
  ExitPolicy p;
  p.threshold = 2.0;
  EXPECT_THROW(super_resolve(m, test_image(1), p, small_patches()), ConfigError);
  p.threshold = 0.0;
  EXPECT_THROW(super_resolve(m, Tensor<float>({1, 40, 40}), p, small_patches()), ShapeError);
  const Tensor<float> wrong_hr({3, 10, 10});
  EXPECT_THROW(super_resolve(m, test_image(1), p, small_patches(), &wrong_hr), ShapeError);
  m.find("head.bias")->var.mutable_value()[0] = std::numeric_limits<float>::infinity();
  EXPECT_THROW(super_resolve(m, test_image(1), p, small_patches()), StateError);
}

TEST(Sweep, PointsAndCsv) {
  const MultiExitSR m = spread_model(13);
  std::vector<ImagePair> images;
  for (int i = 0; i < 2; ++i) {
    ImagePair pair;
    pair.name = "i" + std::to_string(i);
    pair.hr = quantize_8bit(test_image(20 + i, 48, 60));
    pair.lr = bicubic_downsample(pair.hr, 2);
    images.push_back(std::move(pair));
  }
  const std::vector<double> taus = {-1.0, -0.2, 0.0, 0.3, 1.0};
  ExitPolicy base;
  const auto pts = sweep(m, images, taus, base, small_patches());
  ASSERT_EQ(pts.size(), taus.size());
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_LE(pts[k].total_macs, pts[k - 1].total_macs);
  EXPECT_EQ(pts.back().mean_exit_depth, 1.0);
  EXPECT_EQ(pts.front().mean_exit_depth, 4.0);

  // The floor point reproduces the full-depth baseline metrics.
  double ps = 0.0, ss = 0.0;
  for (const auto& img : images) {
    auto [grid, patches] = split(img.lr, 12, 10);
    std::vector<Tensor<float>> outs;
    for (const auto& q : patches) outs.push_back(m.forward_full(q.reshaped({1, 3, 12, 12})).reshaped({3, 24, 24}));
    const auto full = quantize_8bit(merge(grid, outs, 2));
    ps += psnr(full, img.hr);
    ss += ssim(full, img.hr);
  }
  EXPECT_DOUBLE_EQ(pts.front().psnr_db, ps / 2.0);
  EXPECT_DOUBLE_EQ(pts.front().ssim, ss / 2.0);

  const auto dir = testing::scratch_dir("sweep");
  write_sweep_csv(dir / "sweep.csv", pts);
  std::ifstream is(dir / "sweep.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "threshold,mean_exit_depth,mean_macs_per_patch,total_macs,psnr_db,ssim");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 5);

  const std::vector<double> unsorted = {0.0, -1.0};
  EXPECT_THROW(sweep(m, images, unsorted, base, small_patches()), ConfigError);
}

TEST(ExitMap, CellsMirrorTheTrace) {
  const MultiExitSR m = spread_model(15);
  ExitPolicy p;
  p.threshold = 0.0;
  const SrResult r = super_resolve(m, test_image(16), p, small_patches());
  const ExitMap map = exit_map(r.trace, r.grid);
  ASSERT_EQ(map.rows * map.cols, r.grid.size());
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    EXPECT_EQ(map.at(i / map.cols, i % map.cols), r.trace.patches[i].exit_index);
    EXPECT_EQ(r.grid.coords[i], (PatchCoord{r.grid.rows[i / map.cols], r.grid.cols[i % map.cols]}));
  }

  const auto dir = testing::scratch_dir("exit_map");
  write_exit_map_png(dir / "map.png", map, 4);
  const auto png = read_png(dir / "map.png");
  EXPECT_EQ(png.shape(), (Shape{3, map.rows * 4, map.cols * 4}));
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const std::size_t y = (i / map.cols) * 4 + 1, x = (i % map.cols) * 4 + 2;
    const float want = std::round(255.0f * static_cast<float>(map.index[i]) / 4.0f) / 255.0f;
    EXPECT_NEAR(png[y * png.dim(2) + x], want, 1e-6);
  }
  write_exit_map_csv(dir / "map.csv", r.trace);
  std::ifstream is(dir / "map.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "top,left,exit_index");
  std::size_t k = 0;
  while (std::getline(is, line)) {
    const auto& t = r.trace.patches[k++];
    EXPECT_EQ(line, std::to_string(t.coord.top) + "," + std::to_string(t.coord.left) + "," +
                        std::to_string(t.exit_index));
  }
  EXPECT_EQ(k, r.grid.size());

  ExitPolicy floor;
  floor.threshold = -1.0;
  const auto full = exit_map(super_resolve(m, test_image(16), floor, small_patches()).trace, r.grid);
  for (int v : full.index) EXPECT_EQ(v, 4);
}

}  // namespace
}  // namespace ape
