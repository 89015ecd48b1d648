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

#include "ape/exit_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ape/error.hpp"
#include "ape/image_io.hpp"
#include "ape/kernels.hpp"
#include "ape/metrics.hpp"

namespace ape {

std::string to_string(SignalSource s) {
  switch (s) {
    case SignalSource::kRegressor: return "regressor";
    case SignalSource::kOracle: return "oracle";
    case SignalSource::kAbsolutePerformance: return "ap";
  }
  return "?";
}

SignalSource parse_signal_source(const std::string& s) {
  if (s == "regressor") return SignalSource::kRegressor;
  if (s == "oracle") return SignalSource::kOracle;
  if (s == "ap" || s == "absolute_performance") return SignalSource::kAbsolutePerformance;
  throw ConfigError("unknown signal source '" + s + "' (expected regressor, oracle or ap)");
}

std::string to_string(ExitOutput o) {
  return o == ExitOutput::kPreviousFeature ? "previous" : "current";
}

ExitOutput parse_exit_output(const std::string& s) {
  if (s == "previous") return ExitOutput::kPreviousFeature;
  if (s == "current") return ExitOutput::kCurrentFeature;
  throw ConfigError("unknown exit output '" + s + "' (expected previous or current)");
}

void ExitPolicy::validate() const {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw ConfigError("threshold " + std::to_string(threshold) + " outside [-1, 1]");
  }
}

bool ExitPolicy::retires(float signal) const {
  if (source == SignalSource::kAbsolutePerformance) return signal >= threshold;
  // tanh can round to exactly 1 in float, so the ceiling is explicit.
  return threshold >= 1.0 || signal < threshold;
}

double ExitTrace::mean_exit_depth() const {
  if (patches.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : patches) s += p.exit_index;
  return s / static_cast<double>(patches.size());
}

std::uint64_t ExitTrace::total_macs() const {
  std::uint64_t s = 0;
  for (const auto& p : patches) s += p.macs;
  return s;
}

std::vector<std::size_t> ExitTrace::histogram() const {
  std::vector<std::size_t> h(static_cast<std::size_t>(num_exits) + 1, 0);
  for (const auto& p : patches) ++h.at(static_cast<std::size_t>(p.exit_index));
  return h;
}

void InferenceOptions::validate() const {
  if (patch_size == 0) throw ConfigError("patch_size must be positive");
  if (stride == 0 || stride > patch_size) throw ConfigError("stride must be in [1, patch_size]");
  if (parallel_size == 0) throw ConfigError("parallel_size must be positive");
}

namespace {

std::vector<double> row_psnrs(const Tensor<float>& out, std::span<const Tensor<float>> hr,
                              std::span<const std::size_t> ids) {
  std::vector<double> p(ids.size());
  for (std::size_t b = 0; b < ids.size(); ++b) p[b] = psnr(kernels::unstack_row(out, b), hr[ids[b]]);
  return p;
}

template <typename V>
V pick(const V& v, std::span<const std::size_t> rows) {
  V out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(v[r]);
  return out;
}

}  // namespace

SrResult super_resolve(const MultiExitSR& model, const Tensor<float>& lr, const ExitPolicy& policy,
                       const InferenceOptions& opts, const Tensor<float>* hr) {
  policy.validate();
  opts.validate();
  if (!model.finite()) throw StateError("model has non-finite parameters");
  if (lr.rank() != 3 || lr.dim(0) != 3) throw ShapeError("expected a (3,H,W) image, got " + shape_string(lr.shape()));
  const int scale = model.config().scale;
  const bool oracle = policy.source == SignalSource::kOracle;
  if (oracle && hr == nullptr) throw ConfigError("oracle signal needs the HR reference");
  if (hr != nullptr && hr->shape() != Shape{3, lr.dim(1) * scale, lr.dim(2) * scale}) {
    throw ShapeError("HR " + shape_string(hr->shape()) + " is not " + std::to_string(scale) + "x LR " +
                     shape_string(lr.shape()));
  }

  SrResult res;
  auto [grid, lr_patches] = split(lr, opts.patch_size, opts.stride);
  res.grid = std::move(grid);
  const std::size_t n = res.grid.size();
  std::vector<Tensor<float>> hr_patches;
  if (oracle) {
    const std::size_t hp = opts.patch_size * static_cast<std::size_t>(scale);
    for (const auto& c : res.grid.coords) {
      hr_patches.push_back(crop(*hr, c.top * scale, c.left * scale, hp, hp));
    }
  }

  const int E = model.num_exits();
  const CostModel cost(model.config(), opts.patch_size, opts.patch_size);
  res.trace.num_exits = E;
  res.trace.patches.resize(n);
  res.patches.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.trace.patches[i].coord = res.grid.coords[i];

  auto emit = [&](const Tensor<float>& feature, std::span<const std::size_t> rows,
                  std::span<const std::size_t> ids, int exit_index) {
    if (rows.empty()) return;
    const Tensor<float> out = model.tail(kernels::select_batch(feature, rows));
    const std::uint64_t macs = cost.at_exit(exit_index).total();
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const std::size_t id = ids[b];
      res.patches[id] = kernels::unstack_row(out, b);
      res.trace.patches[id].exit_index = exit_index;
      res.trace.patches[id].macs = macs;
    }
  };

  for (std::size_t start = 0; start < n; start += opts.parallel_size) {
    const std::size_t count = std::min(opts.parallel_size, n - start);
    std::vector<std::size_t> active(count);
    std::iota(active.begin(), active.end(), start);
    ExitState state = model.begin(kernels::stack<float>(std::span(lr_patches).subspan(start, count)));
    std::vector<double> prev_psnr;
    if (oracle) prev_psnr = row_psnrs(model.tail(state.feature), hr_patches, active);

    for (int j = 1; j <= E && !active.empty(); ++j) {
      StepResult step = model.forward_step(state);
      const std::size_t m = active.size();
      std::vector<float> signal(m);
      std::vector<double> cur_psnr;
      if (oracle) {
        cur_psnr = row_psnrs(model.tail(step.state.feature), hr_patches, active);
        for (std::size_t b = 0; b < m; ++b) {
          signal[b] = static_cast<float>(incremental_capacity(cur_psnr[b], prev_psnr[b]));
        }
      } else {
        for (std::size_t b = 0; b < m; ++b) signal[b] = step.prediction[b];
      }

      std::vector<std::size_t> keep, leave, leave_ids;
      for (std::size_t b = 0; b < m; ++b) {
        res.trace.patches[active[b]].signals.push_back(signal[b]);
        if (policy.retires(signal[b])) {
          leave.push_back(b);
          leave_ids.push_back(active[b]);
        } else {
          keep.push_back(b);
        }
      }
      const bool previous = policy.output == ExitOutput::kPreviousFeature &&
                            policy.source != SignalSource::kAbsolutePerformance;
      emit(previous ? state.feature : step.state.feature, leave, leave_ids, j);
      if (j == E) {
        emit(step.state.feature, keep, pick(active, keep), E);
        break;
      }
      if (keep.empty()) break;
      if (keep.size() != m) {
        state.feature = kernels::select_batch(step.state.feature, keep);
        if (oracle) cur_psnr = pick(cur_psnr, keep);
        active = pick(active, keep);
      } else {
        state.feature = std::move(step.state.feature);
      }
      state.exit_index = j;
      prev_psnr = std::move(cur_psnr);
    }
  }

  res.image = clamp01(merge(res.grid, res.patches, scale, opts.merge));
  return res;
}

std::vector<TradeoffPoint> sweep(const MultiExitSR& model, std::span<const ImagePair> images,
                                 std::span<const double> thresholds, const ExitPolicy& base,
                                 const InferenceOptions& opts) {
  if (images.empty()) throw ConfigError("sweep needs at least one image");
  if (thresholds.empty()) throw ConfigError("sweep needs at least one threshold");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw ConfigError("sweep thresholds must be sorted ascending");
  }
  std::vector<TradeoffPoint> points;
  for (double t : thresholds) {
    ExitPolicy policy = base;
    policy.threshold = t;
    TradeoffPoint pt;
    pt.threshold = t;
    std::size_t patches = 0;
    double depth = 0.0;
    for (const auto& img : images) {
      if (img.hr.numel() == 0) throw IoError("missing HR reference for " + img.name);
      const SrResult r = super_resolve(model, img.lr, policy, opts, &img.hr);
      const QualityReport q = quality(quantize_8bit(r.image), img.hr);
      pt.psnr_db += q.psnr_db;
      pt.ssim += q.ssim;
      pt.total_macs += r.trace.total_macs();
      depth += r.trace.mean_exit_depth() * static_cast<double>(r.trace.patches.size());
      patches += r.trace.patches.size();
    }
    pt.psnr_db /= static_cast<double>(images.size());
    pt.ssim /= static_cast<double>(images.size());
    pt.mean_exit_depth = depth / static_cast<double>(patches);
    pt.mean_macs_per_patch = static_cast<double>(pt.total_macs) / static_cast<double>(patches);
    points.push_back(pt);
  }
  return points;
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const TradeoffPoint> points) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << "threshold,mean_exit_depth,mean_macs_per_patch,total_macs,psnr_db,ssim\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.9g,%.9g,%llu,%.9g,%.9g\n", p.threshold, p.mean_exit_depth,
                  p.mean_macs_per_patch, static_cast<unsigned long long>(p.total_macs), p.psnr_db, p.ssim);
    os << buf;
  }
}

ExitMap exit_map(const ExitTrace& trace, const PatchGrid& grid) {
  if (trace.patches.size() != grid.size()) throw ShapeError("exit_map: trace and grid sizes differ");
  ExitMap map;
  map.rows = grid.rows.size();
  map.cols = grid.cols.size();
  map.num_exits = trace.num_exits;
  map.index.assign(map.rows * map.cols, -1);
  for (const auto& p : trace.patches) {
    const auto r = std::lower_bound(grid.rows.begin(), grid.rows.end(), p.coord.top) - grid.rows.begin();
    const auto c = std::lower_bound(grid.cols.begin(), grid.cols.end(), p.coord.left) - grid.cols.begin();
    map.index[static_cast<std::size_t>(r) * map.cols + static_cast<std::size_t>(c)] = p.exit_index;
  }
  return map;
}

void write_exit_map_png(const std::filesystem::path& path, const ExitMap& map, std::size_t cell_px) {
  if (cell_px == 0) throw ConfigError("cell_px must be positive");
  const std::size_t h = map.rows * cell_px, w = map.cols * cell_px;
  std::vector<std::uint8_t> px(h * w);
  const int E = std::max(map.num_exits, 1);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const int j = std::max(map.at(y / cell_px, x / cell_px), 0);
      px[y * w + x] = static_cast<std::uint8_t>((255 * j + E / 2) / E);
    }
  write_png_gray(path, px, h, w);
}

void write_exit_map_csv(const std::filesystem::path& path, const ExitTrace& trace) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << "top,left,exit_index\n";
  for (const auto& p : trace.patches) os << p.coord.top << ',' << p.coord.left << ',' << p.exit_index << '\n';
}

}  // namespace ape
