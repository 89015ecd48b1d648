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

#include "ape/patchwork.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ape/image_io.hpp"

namespace ape {

std::vector<std::size_t> axis_positions(std::size_t extent, std::size_t patch, std::size_t stride) {
  if (patch == 0 || patch > extent) {
    throw ShapeError("patch size " + std::to_string(patch) + " exceeds image side " +
                     std::to_string(extent));
  }
  if (stride == 0 || stride > patch) {
    throw ConfigError("stride must lie in [1, patch size], got " + std::to_string(stride));
  }
  std::vector<std::size_t> pos;
  for (std::size_t p = 0; p + patch < extent; p += stride) pos.push_back(p);
  pos.push_back(extent - patch);
  return pos;
}

PatchGrid make_grid(std::size_t height, std::size_t width, std::size_t patch, std::size_t stride) {
  PatchGrid g;
  g.height = height;
  g.width = width;
  g.patch = patch;
  g.stride = stride;
  g.rows = axis_positions(height, patch, stride);
  g.cols = axis_positions(width, patch, stride);
  for (std::size_t r : g.rows)
    for (std::size_t c : g.cols) g.coords.push_back({r, c});
  return g;
}

std::pair<PatchGrid, std::vector<Tensor<float>>> split(const Tensor<float>& image,
                                                       std::size_t patch, std::size_t stride) {
  if (image.rank() != 3) throw ShapeError("split: expected (C,H,W), got " + shape_string(image.shape()));
  PatchGrid grid = make_grid(image.dim(1), image.dim(2), patch, stride);
  std::vector<Tensor<float>> patches;
  patches.reserve(grid.size());
  for (const auto& c : grid.coords) patches.push_back(crop(image, c.top, c.left, patch, patch));
  return {std::move(grid), std::move(patches)};
}

namespace {

std::vector<double> window_1d(std::size_t n, MergeWeighting weighting) {
  std::vector<double> w(n, 1.0);
  if (weighting == MergeWeighting::kRaisedCosine) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

}  // namespace

Tensor<float> merge(const PatchGrid& grid, std::span<const Tensor<float>> patches, int scale,
                    MergeWeighting weighting) {
  if (scale < 1) throw ConfigError("merge: scale must be positive");
  if (patches.size() != grid.size()) {
    throw ShapeError("merge: " + std::to_string(patches.size()) + " patches for a grid of " +
                     std::to_string(grid.size()));
  }
  const auto s = static_cast<std::size_t>(scale);
  const std::size_t sp = grid.patch * s;
  const std::size_t C = patches.empty() ? 3 : patches[0].dim(0);
  for (const auto& p : patches) {
    if (p.shape() != Shape{C, sp, sp}) {
      throw ShapeError("merge: patch shape " + shape_string(p.shape()) + ", expected " +
                       shape_string({C, sp, sp}));
    }
  }
  const std::size_t H = grid.height * s, W = grid.width * s;

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.coords[a] < grid.coords[b]; });

  const std::vector<double> win = window_1d(sp, weighting);
  Tensor<float> out({C, H, W});
  const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(H);

#pragma omp parallel
  {
    std::vector<double> acc(C * W), wsum(W);
#pragma omp for schedule(static)
    for (std::ptrdiff_t yy = 0; yy < nrows; ++yy) {
      const auto y = static_cast<std::size_t>(yy);
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(wsum.begin(), wsum.end(), 0.0);
      for (std::size_t idx : order) {
        const std::size_t top = grid.coords[idx].top * s, left = grid.coords[idx].left * s;
        if (y < top || y >= top + sp) continue;
        const std::size_t py = y - top;
        const Tensor<float>& p = patches[idx];
        for (std::size_t px = 0; px < sp; ++px) {
          const double w = win[py] * win[px];
          wsum[left + px] += w;
          for (std::size_t c = 0; c < C; ++c) {
            acc[c * W + left + px] += w * static_cast<double>(p[(c * sp + py) * sp + px]);
          }
        }
      }
      for (std::size_t x = 0; x < W; ++x) {
        if (!(wsum[x] > 0.0)) continue;  // unreachable for a valid grid
        for (std::size_t c = 0; c < C; ++c) {
          out[(c * H + y) * W + x] = static_cast<float>(acc[c * W + x] / wsum[x]);
        }
      }
    }
  }
  return out;
}

}  // namespace ape
