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

#ifndef APE_MODEL_HPP_
#define APE_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ape/autograd.hpp"
#include "ape/optim.hpp"
#include "ape/tensor.hpp"

namespace ape {

enum class Preset { kTiny, kEdsr };

std::string to_string(Preset p);
Preset parse_preset(const std::string& s);

struct BackboneConfig {
  Preset preset = Preset::kTiny;
  int scale = 2;
  int channels = 16;
  int num_blocks = 8;
  int exit_interval = 2;
  double residual_scaling = 1.0;

  // C=16, N=8, k=2, residual scaling 1.0
  static BackboneConfig tiny(int scale = 2);
  // C=256, N=32, k=4, residual scaling 0.1
  static BackboneConfig edsr(int scale = 2);

  int num_exits() const { return num_blocks / exit_interval; }
  // Body depth (in blocks) reached at exit j; exit 0 is the head output.
  int blocks_at_exit(int j) const { return j * exit_interval; }
  void validate() const;

  // Same layer shapes, so parameters transfer one-to-one.
  bool same_architecture(const BackboneConfig& other) const;
  bool operator==(const BackboneConfig&) const = default;
};

// What the shared regressor head was trained to predict.
enum class ExitSignal { kIncrementalCapacity, kAbsolutePerformance };

std::string to_string(ExitSignal s);
ExitSignal parse_exit_signal(const std::string& s);

// Training provenance recorded in checkpoints.
struct ModelMeta {
  std::string stage = "init";  // init | base | multiexit | joint
  ExitSignal signal = ExitSignal::kIncrementalCapacity;
  bool operator==(const ModelMeta&) const = default;
};

struct ConvLayer {
  Parameter<float> weight;
  Parameter<float> bias;
};

struct ResBlock {
  ConvLayer conv1;
  ConvLayer conv2;
};

// Body feature of a batch of patches after some exit (0 = head output).
struct ExitState {
  Tensor<float> feature;
  int exit_index = 0;
};

struct StepResult {
  ExitState state;
  Tensor<float> prediction;  // (B, 1), regressor output at the new exit
};

struct AllExitOutputs {
  Var<float> f0;                     // head output
  std::vector<Var<float>> features;  // f at exits 1..E
  std::vector<Var<float>> outputs;   // tail(f_j), exits 1..E
  std::vector<Var<float>> predictions;  // regressor at exits 1..E, (B,1)
};

// Head / body / tail SR backbone with exits every `exit_interval` body blocks.
// All exits share one tail and one regressor (global average pool, a single
// fully-connected unit, tanh).
class MultiExitSR {
 public:
  static MultiExitSR build(const BackboneConfig& config, std::uint64_t seed);

  // Parameters are shared graph leaves, so copies must be explicit.
  MultiExitSR(const MultiExitSR&) = delete;
  MultiExitSR& operator=(const MultiExitSR&) = delete;
  MultiExitSR(MultiExitSR&&) = default;
  MultiExitSR& operator=(MultiExitSR&&) = default;
  MultiExitSR clone() const;

  const BackboneConfig& config() const { return config_; }
  const ModelMeta& meta() const { return meta_; }
  ModelMeta& meta() { return meta_; }
  int num_exits() const { return config_.num_exits(); }
  std::vector<int> exit_layers() const;

  // Sorted by name; this is the checkpoint record order.
  std::vector<Parameter<float>*> parameters();
  std::vector<const Parameter<float>*> parameters() const;
  std::vector<Parameter<float>*> regressor_parameters();
  // Head, body and tail.
  std::vector<Parameter<float>*> sr_parameters();
  Parameter<float>* find(const std::string& name);
  std::size_t parameter_count() const;

  // Differentiable path (training).
  Var<float> head(const Var<float>& x) const;
  Var<float> body(const Var<float>& f, int first_block, int count) const;
  Var<float> tail(const Var<float>& f) const;
  Var<float> regress(const Var<float>& f) const;
  AllExitOutputs forward_all_exits(const Var<float>& x) const;

  // Inference path; same kernels and operation order as the graph path, so
  // values are bit-identical.
  ExitState begin(const Tensor<float>& x) const;
  StepResult forward_step(const ExitState& state) const;
  Tensor<float> tail(const Tensor<float>& f) const;
  Tensor<float> regress(const Tensor<float>& f) const;
  // Head through the deepest exit, then tail.
  Tensor<float> forward_full(const Tensor<float>& x) const;

  // True if every parameter value is finite.
  bool finite() const;

 private:
  MultiExitSR() = default;

  Tensor<float> block_values(const Tensor<float>& f, int index) const;
  static Tensor<float> conv_values(const ConvLayer& layer, const Tensor<float>& x);
  static Var<float> conv_graph(const ConvLayer& layer, const Var<float>& x);

  BackboneConfig config_;
  ModelMeta meta_;
  ConvLayer head_;
  std::vector<ResBlock> body_;
  std::vector<ConvLayer> upsample_;
  std::vector<int> upsample_factor_;
  ConvLayer tail_out_;
  Parameter<float> reg_weight_;
  Parameter<float> reg_bias_;
};

// Checkpoint container: a text header of key=value lines terminated by "end",
// then one record per parameter in name order:
//   u32 name length, name bytes, u32 rank, u32 extents..., u64 count,
//   count little-endian float32 values.
void save_checkpoint(const MultiExitSR& model, const std::filesystem::path& path);
MultiExitSR load_checkpoint(const std::filesystem::path& path);

// Header-only read.
struct CheckpointHeader {
  BackboneConfig config;
  ModelMeta meta;
  int format_version = 0;
};
CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

// Copies weights from a checkpoint into an existing model whose layer shapes
// match (the exit interval may differ, e.g. a single-exit pretrain loaded into
// a multi-exit model). Returns the number of parameters copied.
std::size_t load_weights_into(MultiExitSR& model, const std::filesystem::path& path);

}  // namespace ape

#endif  // APE_MODEL_HPP_
