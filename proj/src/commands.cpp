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

#include "ape/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ape/data.hpp"
#include "ape/error.hpp"
#include "ape/exit_engine.hpp"
#include "ape/image_io.hpp"
#include "ape/metrics.hpp"
#include "ape/resample.hpp"

namespace fs = std::filesystem;

namespace ape {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.get("output_dir");
  fs::create_directories(dir);
  return dir;
}

MultiExitSR load_model(const RunConfig& cfg) {
  return load_checkpoint(cfg.get_path("checkpoint"));
}

// Inference geometry comes from the checkpoint; a conflicting scale key is
// an error rather than a silent override.
void check_scale(const RunConfig& cfg, const MultiExitSR& model) {
  if (cfg.get_int("scale") != model.config().scale) {
    throw ConfigError("scale=" + cfg.get("scale") + " but the checkpoint is x" +
                      std::to_string(model.config().scale));
  }
}

std::vector<ImagePair> load_corpus(const RunConfig& cfg, const std::string& key, int scale,
                                   const std::string& split) {
  return load_pairs(build_index(cfg.get_path(key), scale, split));
}

}  // namespace

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  const BackboneConfig bb = cfg.backbone();
  const TrainConfig tc = cfg.train();
  const fs::path dir = output_dir(cfg);

  MultiExitSR model = MultiExitSR::build(bb, tc.seed);
  if (cfg.has_value("init_checkpoint")) {
    const fs::path init = cfg.get_path("init_checkpoint");
    const CheckpointHeader h = read_checkpoint_header(init);
    load_weights_into(model, init);
    model.meta() = h.meta;
    out << "initialised from " << init.string() << " (stage " << h.meta.stage << ")\n";
  }
  if (tc.stage == Stage::kJoint && model.meta().stage != "multiexit" && model.meta().stage != "joint") {
    throw StateError("stage=joint needs init_checkpoint from a multiexit (or joint) run; got stage '" +
                     model.meta().stage + "'");
  }
  if (tc.regressor_only && model.meta().stage == "init") {
    throw StateError("regressor_only needs a trained init_checkpoint");
  }
  const std::vector<ImagePair> data = load_corpus(cfg, "corpus", bb.scale, "train");
  out << "training " << to_string(tc.stage) << " on " << data.size() << " images, "
      << tc.epochs * tc.steps_per_epoch << " steps\n";

  const int every = std::max(cfg.get_int("log_every"), 1);
  const auto log = train(model, data, tc, [&](const LogRow& r) {
    if (r.step % every == 0) {
      out << "step " << r.step << " epoch " << r.epoch << " L_m " << fmt("%.6f", r.l_m) << " L_ic "
          << fmt("%.6f", r.l_ic) << " lr " << fmt("%g", r.lr) << std::endl;
    }
  });
  save_checkpoint(model, dir / "model.ckpt");
  write_log_csv(dir / "train_log.csv", log);
  cfg.write_resolved(dir / "train_config.txt");
  out << "wrote " << (dir / "model.ckpt").string() << "\n";
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const MultiExitSR model = load_model(cfg);
  check_scale(cfg, model);
  const ExitPolicy policy = cfg.policy();
  const InferenceOptions opts = cfg.inference();
  const fs::path dir = output_dir(cfg);
  const int scale = model.config().scale;
  const std::vector<ImagePair> data = load_corpus(cfg, "corpus", scale, "val");

  std::ofstream os(dir / "metrics.csv", std::ios::trunc);
  if (!os) throw IoError("cannot write " + (dir / "metrics.csv").string());
  os << "image,psnr_db,ssim,bicubic_psnr_db,bicubic_ssim,mean_exit_depth,mean_macs_per_patch\n";
  double sums[6] = {0, 0, 0, 0, 0, 0};
  for (const auto& img : data) {
    const SrResult r = super_resolve(model, img.lr, policy, opts, &img.hr);
    const QualityReport q = quality(quantize_8bit(r.image), img.hr);
    const QualityReport qb = quality(quantize_8bit(bicubic_upsample(img.lr, scale)), img.hr);
    const double row[6] = {q.psnr_db, q.ssim, qb.psnr_db, qb.ssim, r.trace.mean_exit_depth(),
                           static_cast<double>(r.trace.total_macs()) / static_cast<double>(r.trace.patches.size())};
    os << img.name;
    for (int i = 0; i < 6; ++i) {
      os << ',' << fmt("%.17g", row[i]);
      sums[i] += row[i];
    }
    os << '\n';
    out << img.name << ": PSNR " << fmt("%.3f", q.psnr_db) << " dB (bicubic " << fmt("%.3f", qb.psnr_db)
        << "), SSIM " << fmt("%.4f", q.ssim) << ", mean exit " << fmt("%.2f", row[4]) << "\n";
  }
  os << "mean";
  for (double s : sums) os << ',' << fmt("%.17g", s / static_cast<double>(data.size()));
  os << '\n';
  cfg.write_resolved(dir / "eval_config.txt");
  out << "mean PSNR " << fmt("%.3f", sums[0] / static_cast<double>(data.size())) << " dB over " << data.size()
      << " images\n";
}

void cmd_sr(const RunConfig& cfg, std::ostream& out) {
  const MultiExitSR model = load_model(cfg);
  check_scale(cfg, model);
  const ExitPolicy policy = cfg.policy();
  const InferenceOptions opts = cfg.inference();
  const Tensor<float> lr = read_png(cfg.get_path("input"));
  Tensor<float> hr;
  if (cfg.has_value("hr")) hr = read_png(cfg.get_path("hr"));
  const fs::path target = cfg.has_value("output") ? cfg.get_path("output") : output_dir(cfg) / "sr.png";
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  fs::create_directories(dir);

  const SrResult r = super_resolve(model, lr, policy, opts, hr.numel() ? &hr : nullptr);
  write_png(target, r.image);
  if (cfg.get_bool("exit_map")) {
    const auto stem = target.stem().string();
    write_exit_map_png(dir / (stem + "_exit_map.png"), exit_map(r.trace, r.grid),
                       static_cast<std::size_t>(cfg.get_int("cell_px")));
    write_exit_map_csv(dir / (stem + "_exit_map.csv"), r.trace);
  }
  cfg.write_resolved(dir / "sr_config.txt");
  out << "wrote " << target.string() << " (" << r.image.dim(1) << "x" << r.image.dim(2) << "), "
      << r.trace.patches.size() << " patches, mean exit " << fmt("%.2f", r.trace.mean_exit_depth()) << "\n";
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const MultiExitSR model = load_model(cfg);
  check_scale(cfg, model);
  const ExitPolicy base = cfg.policy();
  const InferenceOptions opts = cfg.inference();
  const std::vector<double> thresholds = cfg.get_doubles("thresholds");
  const fs::path dir = output_dir(cfg);
  const std::vector<ImagePair> data = load_corpus(cfg, "corpus", model.config().scale, "val");
  const auto points = sweep(model, data, thresholds, base, opts);
  write_sweep_csv(dir / "sweep.csv", points);
  cfg.write_resolved(dir / "sweep_config.txt");
  for (const auto& p : points) {
    out << "tau " << fmt("%+.3f", p.threshold) << "  depth " << fmt("%.3f", p.mean_exit_depth) << "  MACs/patch "
        << fmt("%.4g", p.mean_macs_per_patch) << "  PSNR " << fmt("%.3f", p.psnr_db) << "  SSIM "
        << fmt("%.4f", p.ssim) << "\n";
  }
}

void cmd_flops(const RunConfig& cfg, std::ostream& out) {
  const BackboneConfig bb = cfg.backbone();
  const auto p = static_cast<std::size_t>(cfg.inference().patch_size);
  const CostModel cost(bb, p, p);
  const fs::path dir = output_dir(cfg);
  std::ofstream os(dir / "flops.csv", std::ios::trunc);
  if (!os) throw IoError("cannot write " + (dir / "flops.csv").string());
  os << "exit_index,blocks,head_macs,body_macs,tail_macs,regressor_macs,total_macs\n";
  out << "preset " << to_string(bb.preset) << ", C=" << bb.channels << ", N=" << bb.num_blocks << ", k="
      << bb.exit_interval << ", x" << bb.scale << ", patch " << p << "x" << p << "\n";
  out << "exit  blocks        body MACs       total MACs\n";
  for (const CostRow& r : cost.rows()) {
    const int blocks = bb.blocks_at_exit(r.exit_index);
    os << r.exit_index << ',' << blocks << ',' << r.head << ',' << r.body << ',' << r.tail << ',' << r.regressor
       << ',' << r.total() << '\n';
    char line[128];
    std::snprintf(line, sizeof(line), "%4d  %6d  %14.4fG  %14.4fG\n", r.exit_index, blocks,
                  static_cast<double>(r.body) / 1e9, static_cast<double>(r.total()) / 1e9);
    out << line;
  }
  cfg.write_resolved(dir / "flops_config.txt");
}

void cmd_exitmap(const RunConfig& cfg, std::ostream& out) {
  const MultiExitSR model = load_model(cfg);
  check_scale(cfg, model);
  const ExitPolicy policy = cfg.policy();
  const InferenceOptions opts = cfg.inference();
  const Tensor<float> lr = read_png(cfg.get_path("input"));
  Tensor<float> hr;
  if (cfg.has_value("hr")) hr = read_png(cfg.get_path("hr"));
  const fs::path dir = output_dir(cfg);
  const SrResult r = super_resolve(model, lr, policy, opts, hr.numel() ? &hr : nullptr);
  const ExitMap map = exit_map(r.trace, r.grid);
  write_exit_map_png(dir / "exit_map.png", map, static_cast<std::size_t>(cfg.get_int("cell_px")));
  write_exit_map_csv(dir / "exit_map.csv", r.trace);
  cfg.write_resolved(dir / "exitmap_config.txt");
  const auto hist = r.trace.histogram();
  out << "patches per exit:";
  for (std::size_t j = 1; j < hist.size(); ++j) out << ' ' << j << ':' << hist[j];
  out << "\n";
}

void run_command(const std::string& command, const RunConfig& cfg, std::ostream& out) {
  if (command == "train") return cmd_train(cfg, out);
  if (command == "eval") return cmd_eval(cfg, out);
  if (command == "sr") return cmd_sr(cfg, out);
  if (command == "sweep") return cmd_sweep(cfg, out);
  if (command == "flops") return cmd_flops(cfg, out);
  if (command == "exitmap") return cmd_exitmap(cfg, out);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace ape
