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

#ifndef APE_KERNELS_HPP_
#define APE_KERNELS_HPP_

#include <cstddef>
#include <span>

#include "ape/tensor.hpp"

// Compute kernels behind the differentiable ops. The functions in
// ape::kernels are OpenMP-parallel; ape::kernels::reference holds the serial
// textbook versions they are tested and benchmarked against.
//
// Every parallel kernel assigns each output element to exactly one task and
// accumulates in a fixed order, so results do not depend on the thread count.

namespace ape::kernels {

struct ConvGeometry {
  std::size_t batch, in_channels, out_channels, height, width, kernel, padding;

  std::size_t out_height() const { return height + 2 * padding - kernel + 1; }
  std::size_t out_width() const { return width + 2 * padding - kernel + 1; }
};

// Validates input (B,Cin,H,W), weight (Cout,Cin,k,k), bias (Cout).
template <typename T>
ConvGeometry conv_geometry(const Tensor<T>& input, const Tensor<T>& weight,
                           const Tensor<T>& bias, std::size_t padding);

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias, std::size_t padding);

// Returns dL/dinput for the given dL/doutput.
template <typename T>
Tensor<T> conv2d_backward_input(const Tensor<T>& grad_out, const Tensor<T>& weight,
                                const ConvGeometry& g);

// Accumulates dL/dweight and dL/dbias into the given buffers.
template <typename T>
void conv2d_backward_params(const Tensor<T>& grad_out, const Tensor<T>& input,
                            const ConvGeometry& g, Tensor<T>& grad_weight,
                            Tensor<T>& grad_bias);

// (B, C*r*r, H, W) -> (B, C, r*H, r*W)
template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, std::size_t r);

// (B, C, r*H, r*W) -> (B, C*r*r, H, W); exact inverse of pixel_shuffle.
template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& x, std::size_t r);

// (B, C, H, W) -> (B, C)
template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x);

// Gathers the listed batch rows of a (B, ...) tensor, preserving order.
template <typename T>
Tensor<T> select_batch(const Tensor<T>& x, std::span<const std::size_t> rows);

// Stacks equally-shaped tensors along a new leading batch axis.
template <typename T>
Tensor<T> stack(std::span<const Tensor<T>> items);

// Row b of a (B, ...) tensor as its own tensor of shape (...).
template <typename T>
Tensor<T> unstack_row(const Tensor<T>& x, std::size_t b);

namespace reference {

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias, std::size_t padding);

template <typename T>
Tensor<T> conv2d_backward_input(const Tensor<T>& grad_out, const Tensor<T>& weight,
                                const ConvGeometry& g);

template <typename T>
void conv2d_backward_params(const Tensor<T>& grad_out, const Tensor<T>& input,
                            const ConvGeometry& g, Tensor<T>& grad_weight,
                            Tensor<T>& grad_bias);

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, std::size_t r);

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x);

}  // namespace reference

void set_num_threads(int n);
int num_threads();

}  // namespace ape::kernels

#endif  // APE_KERNELS_HPP_
