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

#ifndef APE_IMAGE_IO_HPP_
#define APE_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ape/tensor.hpp"

namespace ape {

// Reads any 8/16-bit PNG as a (3,H,W) float image in [0,1]. Grayscale is
// replicated to RGB, alpha dropped, 16-bit reduced to 8-bit.
Tensor<float> read_png(const std::filesystem::path& path);

// Writes a (3,H,W) image as 8-bit RGB after clamping and rounding.
void write_png(const std::filesystem::path& path, const Tensor<float>& image);

void write_png_gray(const std::filesystem::path& path, const std::vector<std::uint8_t>& pixels,
                    std::size_t height, std::size_t width);

inline std::uint8_t to_8bit(float v) {
  const float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<std::uint8_t>(c * 255.0f + 0.5f);
}

// round(clamp(x) * 255) / 255, the value an 8-bit PNG round trip would give.
Tensor<float> quantize_8bit(const Tensor<float>& image);

Tensor<float> clamp01(const Tensor<float>& image);

// Crop of a (C,H,W) image.
Tensor<float> crop(const Tensor<float>& image, std::size_t top, std::size_t left,
                   std::size_t height, std::size_t width);

}  // namespace ape

#endif  // APE_IMAGE_IO_HPP_
