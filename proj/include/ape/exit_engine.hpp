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

#ifndef APE_EXIT_ENGINE_HPP_
#define APE_EXIT_ENGINE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ape/data.hpp"
#include "ape/model.hpp"
#include "ape/patchwork.hpp"

namespace ape {

enum class SignalSource {
  kRegressor,            // predicted incremental capacity
  kOracle,               // true incremental capacity from the HR patch
  kAbsolutePerformance,  // regressor trained on tanh(P_j / ap_scale)
};

std::string to_string(SignalSource s);
SignalSource parse_signal_source(const std::string& s);

enum class ExitOutput {
  kPreviousFeature,  // tail(f_{j-1}): the blocks that triggered the exit are dropped
  kCurrentFeature,   // tail(f_j)
};

std::string to_string(ExitOutput o);
ExitOutput parse_exit_output(const std::string& s);

struct ExitPolicy {
  double threshold = 0.0;
  SignalSource source = SignalSource::kRegressor;
  ExitOutput output = ExitOutput::kPreviousFeature;

  void validate() const;
  // Incremental capacity sources retire below the threshold (always at +1).
  // Absolute performance retires once the predicted quality reaches it and
  // emits the current exit's output.
  bool retires(float signal) const;
};

struct PatchTrace {
  PatchCoord coord;
  int exit_index = 0;
  std::vector<float> signals;  // one per visited exit
  std::uint64_t macs = 0;
};

struct ExitTrace {
  int num_exits = 0;
  std::vector<PatchTrace> patches;  // grid order

  double mean_exit_depth() const;
  std::uint64_t total_macs() const;
  // histogram()[j] = patches that left at exit j; index 0 is always empty.
  std::vector<std::size_t> histogram() const;
};

struct InferenceOptions {
  std::size_t patch_size = 48;
  std::size_t stride = 46;
  std::size_t parallel_size = 16;
  MergeWeighting merge = MergeWeighting::kUniform;
  void validate() const;
};

struct SrResult {
  Tensor<float> image;                // merged and clamped to [0,1]
  ExitTrace trace;
  PatchGrid grid;
  std::vector<Tensor<float>> patches;  // raw tail outputs, grid order
};

// Splits `lr` (3,H,W) into patches, steps them exit by exit in batches of
// parallel_size, retires patches per `policy` and merges the outputs. `hr`
// is required for the oracle source.
SrResult super_resolve(const MultiExitSR& model, const Tensor<float>& lr, const ExitPolicy& policy,
                       const InferenceOptions& opts, const Tensor<float>* hr = nullptr);

struct TradeoffPoint {
  double threshold = 0.0;
  double mean_exit_depth = 0.0;
  double mean_macs_per_patch = 0.0;
  std::uint64_t total_macs = 0;
  double psnr_db = 0.0;  // mean over images, 8-bit outputs
  double ssim = 0.0;
};

// One point per threshold; thresholds must be ascending.
std::vector<TradeoffPoint> sweep(const MultiExitSR& model, std::span<const ImagePair> images,
                                 std::span<const double> thresholds, const ExitPolicy& base,
                                 const InferenceOptions& opts);

void write_sweep_csv(const std::filesystem::path& path, std::span<const TradeoffPoint> points);

// Exit index per grid cell.
struct ExitMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int num_exits = 0;
  std::vector<int> index;  // row-major
  int at(std::size_t r, std::size_t c) const { return index[r * cols + c]; }
};

ExitMap exit_map(const ExitTrace& trace, const PatchGrid& grid);

// Gray PNG, one cell_px square per grid cell, intensity 255 * j / E.
void write_exit_map_png(const std::filesystem::path& path, const ExitMap& map, std::size_t cell_px = 16);
// Columns top, left, exit_index in grid order.
void write_exit_map_csv(const std::filesystem::path& path, const ExitTrace& trace);

}  // namespace ape

#endif  // APE_EXIT_ENGINE_HPP_
