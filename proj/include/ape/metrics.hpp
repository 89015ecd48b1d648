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

#ifndef APE_METRICS_HPP_
#define APE_METRICS_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "ape/model.hpp"
#include "ape/tensor.hpp"

namespace ape {

// PSNR of identical inputs; keeps incremental capacity inputs finite.
inline constexpr double kPsnrCapDb = 100.0;

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::size_t n_pixels = 0;
};

template <typename T>
double mean_squared_error(const Tensor<T>& a, const Tensor<T>& b);

double psnr_from_mse(double mse);

// 10*log10(1/MSE) over all values, for signals in [0,1]; capped at 100 dB.
template <typename T>
double psnr(const Tensor<T>& a, const Tensor<T>& b);

// Mean SSIM of (C,H,W) images: 11x11 Gaussian window (sigma 1.5), K1=0.01,
// K2=0.03, dynamic range 1, evaluated at every fully-inside window position,
// averaged per channel and then over channels.
template <typename T>
double ssim(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
QualityReport quality(const Tensor<T>& a, const Tensor<T>& b);

// tanh(p_curr - p_prev): the gain contributed by the blocks between two exits.
inline double incremental_capacity(double p_curr_db, double p_prev_db) {
  return std::tanh(p_curr_db - p_prev_db);
}

// Multiply-accumulate counts for one patch of h x w LR pixels. Each conv
// contributes k*k*Cin*Cout*Hout*Wout; skip additions and biases are not
// counted. A regressor evaluation costs C*h*w (pooling) + C (fully connected).
struct CostRow {
  int exit_index = 0;
  std::uint64_t head = 0;
  std::uint64_t body = 0;       // blocks up to and including this exit
  std::uint64_t tail = 0;
  std::uint64_t regressor = 0;  // one evaluation per visited exit

  std::uint64_t total() const { return head + body + tail + regressor; }
};

class CostModel {
 public:
  CostModel(const BackboneConfig& config, std::size_t h, std::size_t w);

  // exit_index in [0, E]; 0 means head + tail only.
  CostRow at_exit(int exit_index) const;
  std::vector<CostRow> rows() const;

  std::uint64_t block_macs() const { return block_; }
  std::uint64_t regressor_eval_macs() const { return regressor_eval_; }

  static std::uint64_t conv_macs(std::uint64_t cin, std::uint64_t cout, std::uint64_t k,
                                 std::uint64_t h, std::uint64_t w) {
    return k * k * cin * cout * h * w;
  }

 private:
  BackboneConfig config_;
  std::uint64_t head_ = 0, block_ = 0, tail_ = 0, regressor_eval_ = 0;
};

inline CostRow mac_count(const BackboneConfig& config, std::size_t h, std::size_t w, int exit_index) {
  return CostModel(config, h, w).at_exit(exit_index);
}

}  // namespace ape

#endif  // APE_METRICS_HPP_
