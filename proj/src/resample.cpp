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

#include "ape/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ape {

double cubic_kernel(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
  return 0.0;
}

namespace {

std::ptrdiff_t reflect101(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

struct Taps {
  std::vector<std::size_t> offset;  // start index into index/weight arrays, per output
  std::vector<std::size_t> count;
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

Taps make_taps(std::size_t in, std::size_t out) {
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  const double stretch = std::max(1.0, ratio);
  const double support = 2.0 * stretch;
  Taps t;
  for (std::size_t o = 0; o < out; ++o) {
    const double center = (static_cast<double>(o) + 0.5) * ratio;
    const auto lo = static_cast<std::ptrdiff_t>(std::floor(center - support));
    const auto hi = static_cast<std::ptrdiff_t>(std::ceil(center + support));
    t.offset.push_back(t.index.size());
    const std::size_t first = t.weight.size();
    double total = 0.0;
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
      const double w = cubic_kernel((static_cast<double>(i) + 0.5 - center) / stretch);
      if (w == 0.0) continue;
      t.index.push_back(static_cast<std::size_t>(reflect101(i, static_cast<std::ptrdiff_t>(in))));
      t.weight.push_back(w);
      total += w;
    }
    for (std::size_t k = first; k < t.weight.size(); ++k) t.weight[k] /= total;
    t.count.push_back(t.weight.size() - first);
  }
  return t;
}

}  // namespace

Tensor<float> resize_bicubic(const Tensor<float>& image, std::size_t out_height,
                             std::size_t out_width) {
  if (image.rank() != 3) throw ShapeError("resize_bicubic: expected (C,H,W)");
  const std::size_t C = image.dim(0), H = image.dim(1), W = image.dim(2);
  const Taps tx = make_taps(W, out_width);
  const Taps ty = make_taps(H, out_height);
  Tensor<float> out({C, out_height, out_width});
  std::vector<double> tmp(H * out_width);
  for (std::size_t c = 0; c < C; ++c) {
    const float* src = image.raw() + c * H * W;
    for (std::size_t y = 0; y < H; ++y)
      for (std::size_t x = 0; x < out_width; ++x) {
        double s = 0.0;
        for (std::size_t k = 0; k < tx.count[x]; ++k) {
          const std::size_t j = tx.offset[x] + k;
          s += tx.weight[j] * src[y * W + tx.index[j]];
        }
        tmp[y * out_width + x] = s;
      }
    float* dst = out.raw() + c * out_height * out_width;
    for (std::size_t y = 0; y < out_height; ++y)
      for (std::size_t x = 0; x < out_width; ++x) {
        double s = 0.0;
        for (std::size_t k = 0; k < ty.count[y]; ++k) {
          const std::size_t j = ty.offset[y] + k;
          s += ty.weight[j] * tmp[ty.index[j] * out_width + x];
        }
        dst[y * out_width + x] = static_cast<float>(s);
      }
  }
  return out;
}

Tensor<float> bicubic_downsample(const Tensor<float>& image, int scale) {
  if (image.rank() != 3 || scale < 1) throw ShapeError("bicubic_downsample: expected (C,H,W)");
  const auto s = static_cast<std::size_t>(scale);
  if (image.dim(1) % s != 0 || image.dim(2) % s != 0) {
    throw ShapeError("bicubic_downsample: image " + shape_string(image.shape()) +
                     " not divisible by scale " + std::to_string(scale));
  }
  Tensor<float> out = resize_bicubic(image, image.dim(1) / s, image.dim(2) / s);
  for (auto& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

Tensor<float> bicubic_upsample(const Tensor<float>& image, int scale) {
  if (image.rank() != 3 || scale < 1) throw ShapeError("bicubic_upsample: expected (C,H,W)");
  const auto s = static_cast<std::size_t>(scale);
  Tensor<float> out = resize_bicubic(image, image.dim(1) * s, image.dim(2) * s);
  for (auto& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

}  // namespace ape
