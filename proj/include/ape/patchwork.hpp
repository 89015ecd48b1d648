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

#ifndef APE_PATCHWORK_HPP_
#define APE_PATCHWORK_HPP_

#include <span>
#include <utility>
#include <vector>

#include "ape/tensor.hpp"

namespace ape {

struct PatchCoord {
  std::size_t top = 0;
  std::size_t left = 0;
  auto operator<=>(const PatchCoord&) const = default;
};

// Overlapped tiling of an LR image. Positions per axis are 0, s, 2s, ...
// with the last patch clamped flush to the border, so every pixel is covered
// and no patch leaves the image.
struct PatchGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t patch = 0;
  std::size_t stride = 0;
  std::vector<std::size_t> rows;  // top offsets
  std::vector<std::size_t> cols;  // left offsets
  std::vector<PatchCoord> coords;  // row-major

  std::size_t size() const { return coords.size(); }
};

std::vector<std::size_t> axis_positions(std::size_t extent, std::size_t patch, std::size_t stride);

PatchGrid make_grid(std::size_t height, std::size_t width, std::size_t patch, std::size_t stride);

// Splits a (C,H,W) image into (C,p,p) patches in grid order.
std::pair<PatchGrid, std::vector<Tensor<float>>> split(const Tensor<float>& image,
                                                       std::size_t patch, std::size_t stride);

enum class MergeWeighting { kUniform, kRaisedCosine };

// Reassembles (C, scale*p, scale*p) patches into a (C, scale*H, scale*W)
// image. Each output pixel is the weighted mean of the patches covering it;
// contributions are summed in row-major coordinate order, so the result does
// not depend on the order of (grid.coords, patches) pairs.
Tensor<float> merge(const PatchGrid& grid, std::span<const Tensor<float>> patches, int scale,
                    MergeWeighting weighting = MergeWeighting::kUniform);

}  // namespace ape

#endif  // APE_PATCHWORK_HPP_
