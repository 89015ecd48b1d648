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

#ifndef APE_TRAIN_HPP_
#define APE_TRAIN_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ape/autograd.hpp"
#include "ape/data.hpp"
#include "ape/model.hpp"

namespace ape {

enum class Stage { kBase, kMultiExit, kJoint };

std::string to_string(Stage s);
Stage parse_stage(const std::string& s);

struct TrainConfig {
  Stage stage = Stage::kMultiExit;
  int epochs = 300;
  int steps_per_epoch = 100;
  double lr = 1e-4;
  int lr_decay_epoch = 200;  // lr halves once, at the start of this epoch
  int batch_size = 16;
  int hr_patch = 192;
  int scale = 2;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  ExitSignal signal = ExitSignal::kIncrementalCapacity;
  double ap_scale_db = 50.0;  // targets tanh(P_j / ap_scale_db) when signal = ap
  Reduction reduction = Reduction::kMean;
  // Optimise only the regressor on features detached from the SR network.
  bool regressor_only = false;

  void validate() const;
  double lr_at_epoch(int epoch) const;  // epochs count from 1
};

struct LogRow {
  std::int64_t step = 0;
  int epoch = 0;
  double l_m = 0.0;
  double l_ic = 0.0;
  double lr = 0.0;
};

struct StepLosses {
  Var<float> total;
  double l_m = 0.0;
  double l_ic = 0.0;
};

// Per-sample PSNR (capped) of each exit output against HR. `outputs[j]` is
// the (B,3,H,W) output of exit j, j = 0..E; returns psnr[j][b].
std::vector<std::vector<double>> exit_psnrs(const std::vector<Tensor<float>>& outputs,
                                            const Tensor<float>& hr);

// Regressor targets for exits 1..E: tanh(P_j - P_{j-1}) for incremental
// capacity, tanh(P_j / ap_scale_db) for absolute performance. Returns one
// (B,1) tensor per exit.
std::vector<Tensor<float>> targets_from_psnrs(const std::vector<std::vector<double>>& psnr,
                                              ExitSignal signal, double ap_scale_db = 50.0);

// Runs the inference path on a batch and returns per-exit (B,1) targets.
std::vector<Tensor<float>> compute_ic_targets(const MultiExitSR& model, const Tensor<float>& lr,
                                              const Tensor<float>& hr,
                                              ExitSignal signal = ExitSignal::kIncrementalCapacity,
                                              double ap_scale_db = 50.0);

// Reconstruction loss: deepest exit only for the base stage, otherwise the
// sum of per-exit L1 losses.
Var<float> multiexit_loss(const AllExitOutputs& out, const Tensor<float>& hr, Stage stage,
                          Reduction reduction);

// Builds the stage objective for one batch.
StepLosses stage_objective(const MultiExitSR& model, const Batch& batch, const TrainConfig& cfg);

using StepCallback = std::function<void(const LogRow&)>;

// Runs cfg.epochs * cfg.steps_per_epoch Adam steps of the configured stage.
std::vector<LogRow> train(MultiExitSR& model, const std::vector<ImagePair>& data,
                          const TrainConfig& cfg, const StepCallback& on_step = {});

std::vector<LogRow> train_multiexit(MultiExitSR& model, const std::vector<ImagePair>& data,
                                    TrainConfig cfg, const StepCallback& on_step = {});
std::vector<LogRow> train_joint(MultiExitSR& model, const std::vector<ImagePair>& data,
                                TrainConfig cfg, const StepCallback& on_step = {});

void write_log_csv(const std::filesystem::path& path, const std::vector<LogRow>& rows);

struct RegressorEval {
  double mse = 0.0;       // mean (prediction - target)^2 over exits and patches
  double zero_mse = 0.0;  // same with a zero predictor
  std::size_t samples = 0;
};

// Evaluates the regressor on LR/HR patch pairs, `batch` patches at a time.
RegressorEval evaluate_regressor(const MultiExitSR& model, const std::vector<Tensor<float>>& lr_patches,
                                 const std::vector<Tensor<float>>& hr_patches, std::size_t batch,
                                 ExitSignal signal = ExitSignal::kIncrementalCapacity,
                                 double ap_scale_db = 50.0);

}  // namespace ape

#endif  // APE_TRAIN_HPP_
