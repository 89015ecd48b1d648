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

#ifndef APE_RESAMPLE_HPP_
#define APE_RESAMPLE_HPP_

#include "ape/tensor.hpp"

namespace ape {

// Cubic convolution kernel with a = -0.5.
double cubic_kernel(double x);

// Separable bicubic resize of a (C,H,W) image. When shrinking, the kernel is
// stretched by the reduction factor (antialiasing). Borders are extended by
// mirror reflection without repeating the edge sample. No clamping.
Tensor<float> resize_bicubic(const Tensor<float>& image, std::size_t out_height,
                             std::size_t out_width);

// LR image for an HR image whose sides are multiples of `scale`; output
// clamped to [0,1].
Tensor<float> bicubic_downsample(const Tensor<float>& image, int scale);

// Bicubic enlargement by `scale`; output clamped to [0,1].
Tensor<float> bicubic_upsample(const Tensor<float>& image, int scale);

}  // namespace ape

#endif  // APE_RESAMPLE_HPP_
