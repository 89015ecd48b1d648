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

#include "ape/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ape/kernels.hpp"
#include "ape/metrics.hpp"
#include "ape/optim.hpp"

namespace ape {

std::string to_string(Stage s) {
  switch (s) {
    case Stage::kBase: return "base";
    case Stage::kMultiExit: return "multiexit";
    case Stage::kJoint: return "joint";
  }
  return "?";
}

Stage parse_stage(const std::string& s) {
  if (s == "base") return Stage::kBase;
  if (s == "multiexit") return Stage::kMultiExit;
  if (s == "joint") return Stage::kJoint;
  throw ConfigError("unknown stage '" + s + "' (expected base, multiexit or joint)");
}

void TrainConfig::validate() const {
  if (epochs <= 0 || steps_per_epoch <= 0) throw ConfigError("epochs and steps_per_epoch must be positive");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (scale < 1 || hr_patch <= 0 || hr_patch % scale != 0) {
    throw ConfigError("hr_patch " + std::to_string(hr_patch) + " must be a positive multiple of scale " +
                      std::to_string(scale));
  }
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(ap_scale_db > 0.0)) throw ConfigError("ap_scale must be positive");
}

double TrainConfig::lr_at_epoch(int epoch) const {
  return epoch >= lr_decay_epoch ? lr * 0.5 : lr;
}

std::vector<std::vector<double>> exit_psnrs(const std::vector<Tensor<float>>& outputs,
                                            const Tensor<float>& hr) {
  std::vector<std::vector<double>> psnr;
  const std::size_t B = hr.dim(0), row = hr.numel() / B;
  for (const auto& out : outputs) {
    require_same_shape(out, hr, "exit_psnrs");
    std::vector<double> per(B);
    for (std::size_t b = 0; b < B; ++b) {
      double s = 0.0;
      for (std::size_t i = b * row; i < (b + 1) * row; ++i) {
        const double d = static_cast<double>(out[i]) - static_cast<double>(hr[i]);
        s += d * d;
      }
      per[b] = psnr_from_mse(s / static_cast<double>(row));
    }
    psnr.push_back(std::move(per));
  }
  return psnr;
}

std::vector<Tensor<float>> targets_from_psnrs(const std::vector<std::vector<double>>& psnr,
                                              ExitSignal signal, double ap_scale_db) {
  std::vector<Tensor<float>> targets;
  for (std::size_t j = 1; j < psnr.size(); ++j) {
    const std::size_t B = psnr[j].size();
    Tensor<float> t({B, 1});
    for (std::size_t b = 0; b < B; ++b) {
      const double v = signal == ExitSignal::kIncrementalCapacity
                           ? incremental_capacity(psnr[j][b], psnr[j - 1][b])
                           : std::tanh(psnr[j][b] / ap_scale_db);
      t[b] = static_cast<float>(v);
    }
    targets.push_back(std::move(t));
  }
  return targets;
}

std::vector<Tensor<float>> compute_ic_targets(const MultiExitSR& model, const Tensor<float>& lr,
                                              const Tensor<float>& hr, ExitSignal signal,
                                              double ap_scale_db) {
  ExitState s = model.begin(lr);
  std::vector<Tensor<float>> outputs{model.tail(s.feature)};
  while (s.exit_index < model.num_exits()) {
    s = model.forward_step(s).state;
    outputs.push_back(model.tail(s.feature));
  }
  return targets_from_psnrs(exit_psnrs(outputs, hr), signal, ap_scale_db);
}

Var<float> multiexit_loss(const AllExitOutputs& out, const Tensor<float>& hr, Stage stage,
                          Reduction reduction) {
  const Var<float> target = Var<float>::leaf(hr);
  if (stage == Stage::kBase) return l1_loss(out.outputs.back(), target, reduction);
  Var<float> total = l1_loss(out.outputs.front(), target, reduction);
  for (std::size_t j = 1; j < out.outputs.size(); ++j) {
    total = add(total, l1_loss(out.outputs[j], target, reduction));
  }
  return total;
}

namespace {

Var<float> regression_loss(const std::vector<Var<float>>& predictions,
                           const std::vector<Tensor<float>>& targets, Reduction reduction) {
  Var<float> total;
  for (std::size_t j = 0; j < predictions.size(); ++j) {
    Var<float> l = mse_loss(predictions[j], Var<float>::leaf(targets[j]), reduction);
    total = total.defined() ? add(total, l) : l;
  }
  return total;
}

}  // namespace

StepLosses stage_objective(const MultiExitSR& model, const Batch& batch, const TrainConfig& cfg) {
  StepLosses r;
  const Var<float> x = Var<float>::leaf(batch.lr);

  if (cfg.regressor_only) {
    // Inference path: the SR network contributes constants only.
    ExitState s = model.begin(batch.lr);
    std::vector<Tensor<float>> outputs{model.tail(s.feature)};
    std::vector<Var<float>> predictions;
    double l_m = 0.0;
    while (s.exit_index < model.num_exits()) {
      s = model.forward_step(s).state;
      outputs.push_back(model.tail(s.feature));
      predictions.push_back(model.regress(Var<float>::leaf(s.feature)));
      l_m += l1_loss(Var<float>::leaf(outputs.back()), Var<float>::leaf(batch.hr), cfg.reduction).value()[0];
    }
    const auto targets = targets_from_psnrs(exit_psnrs(outputs, batch.hr), cfg.signal, cfg.ap_scale_db);
    Var<float> l_ic = regression_loss(predictions, targets, cfg.reduction);
    r.l_m = l_m;
    r.l_ic = l_ic.value()[0];
    r.total = scale(l_ic, static_cast<float>(cfg.lambda));
    return r;
  }

  if (cfg.stage == Stage::kBase) {
    const Var<float> y = model.tail(model.body(model.head(x), 0, model.config().num_blocks));
    r.total = l1_loss(y, Var<float>::leaf(batch.hr), cfg.reduction);
    r.l_m = r.total.value()[0];
    return r;
  }

  const AllExitOutputs out = model.forward_all_exits(x);
  Var<float> l_m = multiexit_loss(out, batch.hr, cfg.stage, cfg.reduction);
  r.l_m = l_m.value()[0];
  if (cfg.stage != Stage::kJoint) {
    r.total = l_m;
    return r;
  }
  // Targets come from the current network's outputs and act as labels.
  std::vector<Tensor<float>> outputs{model.tail(out.f0.value())};
  for (const auto& o : out.outputs) outputs.push_back(o.value());
  const auto targets = targets_from_psnrs(exit_psnrs(outputs, batch.hr), cfg.signal, cfg.ap_scale_db);
  Var<float> l_ic = regression_loss(out.predictions, targets, cfg.reduction);
  r.l_ic = l_ic.value()[0];
  r.total = add(l_m, scale(l_ic, static_cast<float>(cfg.lambda)));
  return r;
}

std::vector<LogRow> train(MultiExitSR& model, const std::vector<ImagePair>& data,
                          const TrainConfig& cfg, const StepCallback& on_step) {
  cfg.validate();
  if (data.empty()) throw ConfigError("training dataset is empty");
  if (cfg.scale != model.config().scale) {
    throw ConfigError("train scale " + std::to_string(cfg.scale) + " differs from model scale " +
                      std::to_string(model.config().scale));
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<Parameter<float>*> params =
      cfg.regressor_only ? model.regressor_parameters() : model.parameters();
  std::vector<LogRow> log;
  std::int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    AdamOptions opt;
    opt.lr = cfg.lr_at_epoch(epoch);
    for (int i = 0; i < cfg.steps_per_epoch; ++i) {
      const Batch batch = sample_batch(data, static_cast<std::size_t>(cfg.batch_size),
                                       static_cast<std::size_t>(cfg.hr_patch), cfg.scale, rng);
      StepLosses losses = stage_objective(model, batch, cfg);
      if (!std::isfinite(losses.total.value()[0])) {
        throw StateError("training diverged at step " + std::to_string(step + 1));
      }
      backward(losses.total);
      adam_step<float>(params, opt);
      LogRow row{++step, epoch, losses.l_m, losses.l_ic, opt.lr};
      log.push_back(row);
      if (on_step) on_step(row);
    }
  }
  if (!cfg.regressor_only) model.meta().stage = to_string(cfg.stage);
  if (cfg.stage == Stage::kJoint) model.meta().signal = cfg.signal;
  return log;
}

std::vector<LogRow> train_multiexit(MultiExitSR& model, const std::vector<ImagePair>& data,
                                    TrainConfig cfg, const StepCallback& on_step) {
  if (cfg.stage == Stage::kJoint) cfg.stage = Stage::kMultiExit;
  return train(model, data, cfg, on_step);
}

std::vector<LogRow> train_joint(MultiExitSR& model, const std::vector<ImagePair>& data,
                                TrainConfig cfg, const StepCallback& on_step) {
  if (model.meta().stage != "multiexit" && model.meta().stage != "joint") {
    throw StateError("joint training needs a multi-exit trained model (model stage is '" +
                     model.meta().stage + "')");
  }
  cfg.stage = Stage::kJoint;
  return train(model, data, cfg, on_step);
}

void write_log_csv(const std::filesystem::path& path, const std::vector<LogRow>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write log " + path.string());
  os << "step,epoch,L_m,L_ic,lr\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%.9g,%.9g,%.9g\n", static_cast<long long>(r.step), r.epoch,
                  r.l_m, r.l_ic, r.lr);
    os << buf;
  }
}

RegressorEval evaluate_regressor(const MultiExitSR& model, const std::vector<Tensor<float>>& lr_patches,
                                 const std::vector<Tensor<float>>& hr_patches, std::size_t batch,
                                 ExitSignal signal, double ap_scale_db) {
  if (lr_patches.size() != hr_patches.size() || lr_patches.empty()) {
    throw ShapeError("evaluate_regressor: need matching non-empty patch lists");
  }
  RegressorEval ev;
  double se = 0.0, se0 = 0.0;
  for (std::size_t start = 0; start < lr_patches.size(); start += batch) {
    const std::size_t n = std::min(batch, lr_patches.size() - start);
    const auto lr = kernels::stack<float>(std::span(lr_patches).subspan(start, n));
    const auto hr = kernels::stack<float>(std::span(hr_patches).subspan(start, n));
    ExitState s = model.begin(lr);
    std::vector<Tensor<float>> outputs{model.tail(s.feature)};
    std::vector<Tensor<float>> predictions;
    while (s.exit_index < model.num_exits()) {
      StepResult r = model.forward_step(s);
      predictions.push_back(r.prediction);
      s = std::move(r.state);
      outputs.push_back(model.tail(s.feature));
    }
    const auto targets = targets_from_psnrs(exit_psnrs(outputs, hr), signal, ap_scale_db);
    for (std::size_t j = 0; j < targets.size(); ++j)
      for (std::size_t b = 0; b < n; ++b) {
        const double t = targets[j][b], p = predictions[j][b];
        se += (p - t) * (p - t);
        se0 += t * t;
        ++ev.samples;
      }
  }
  ev.mse = se / static_cast<double>(ev.samples);
  ev.zero_mse = se0 / static_cast<double>(ev.samples);
  return ev;
}

}  // namespace ape
