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

#include "ape/metrics.hpp"

#include <array>
#include <cmath>

namespace ape {

template <typename T>
double mean_squared_error(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mse");
  const auto x = a.data();
  const auto y = b.data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

double psnr_from_mse(double mse) {
  if (!(mse > 0.0)) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

template <typename T>
double psnr(const Tensor<T>& a, const Tensor<T>& b) {
  return psnr_from_mse(mean_squared_error(a, b));
}

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;

std::array<double, kWin> gaussian_window() {
  std::array<double, kWin> w{};
  double s = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - kWin / 2;
    w[i] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
    s += w[i];
  }
  for (auto& v : w) v /= s;
  return w;
}

// Separable "valid" Gaussian filter of an h x w plane.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t h, std::size_t w,
                                 const std::array<double, kWin>& g) {
  const std::size_t oh = h - kWin + 1, ow = w - kWin + 1;
  std::vector<double> tmp(h * ow);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += g[k] * src[y * w + x + k];
      tmp[y * ow + x] = s;
    }
  std::vector<double> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += g[k] * tmp[(y + k) * ow + x];
      out[y * ow + x] = s;
    }
  return out;
}

}  // namespace

template <typename T>
double ssim(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "ssim");
  if (a.rank() != 3) throw ShapeError("ssim: expected (C,H,W), got " + shape_string(a.shape()));
  const std::size_t C = a.dim(0), H = a.dim(1), W = a.dim(2);
  if (H < static_cast<std::size_t>(kWin) || W < static_cast<std::size_t>(kWin)) {
    throw ShapeError("ssim: image " + shape_string(a.shape()) + " smaller than the 11x11 window");
  }
  constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
  constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);
  const auto g = gaussian_window();
  const std::size_t hw = H * W;
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<double> x(hw), y(hw), xx(hw), yy(hw), xy(hw);
    for (std::size_t i = 0; i < hw; ++i) {
      x[i] = static_cast<double>(a[c * hw + i]);
      y[i] = static_cast<double>(b[c * hw + i]);
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, H, W, g);
    const auto my = filter_valid(y, H, W, g);
    const auto mxx = filter_valid(xx, H, W, g);
    const auto myy = filter_valid(yy, H, W, g);
    const auto mxy = filter_valid(xy, H, W, g);
    double s = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double vx = mxx[i] - mx[i] * mx[i];
      const double vy = myy[i] - my[i] * my[i];
      const double vxy = mxy[i] - mx[i] * my[i];
      s += ((2.0 * mx[i] * my[i] + c1) * (2.0 * vxy + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    total += s / static_cast<double>(mx.size());
  }
  return total / static_cast<double>(C);
}

template <typename T>
QualityReport quality(const Tensor<T>& a, const Tensor<T>& b) {
  QualityReport r;
  r.psnr_db = psnr(a, b);
  r.ssim = ssim(a, b);
  r.n_pixels = a.rank() == 3 ? a.dim(1) * a.dim(2) : a.numel();
  return r;
}

CostModel::CostModel(const BackboneConfig& config, std::size_t h, std::size_t w) : config_(config) {
  config.validate();
  const std::uint64_t C = static_cast<std::uint64_t>(config.channels);
  head_ = conv_macs(3, C, 3, h, w);
  block_ = 2 * conv_macs(C, C, 3, h, w);
  std::uint64_t th = h, tw = w;
  if (config.scale == 3) {
    tail_ += conv_macs(C, 9 * C, 3, th, tw);
    th *= 3;
    tw *= 3;
  } else {
    for (int s = config.scale; s > 1; s /= 2) {
      tail_ += conv_macs(C, 4 * C, 3, th, tw);
      th *= 2;
      tw *= 2;
    }
  }
  tail_ += conv_macs(C, 3, 3, th, tw);
  regressor_eval_ = C * h * w + C;
}

CostRow CostModel::at_exit(int exit_index) const {
  if (exit_index < 0 || exit_index > config_.num_exits()) {
    throw ConfigError("exit index " + std::to_string(exit_index) + " out of range [0," +
                      std::to_string(config_.num_exits()) + "]");
  }
  CostRow r;
  r.exit_index = exit_index;
  r.head = head_;
  r.body = block_ * static_cast<std::uint64_t>(config_.blocks_at_exit(exit_index));
  r.tail = tail_;
  r.regressor = regressor_eval_ * static_cast<std::uint64_t>(exit_index);
  return r;
}

std::vector<CostRow> CostModel::rows() const {
  std::vector<CostRow> out;
  for (int j = 0; j <= config_.num_exits(); ++j) out.push_back(at_exit(j));
  return out;
}

template double mean_squared_error(const Tensor<float>&, const Tensor<float>&);
template double mean_squared_error(const Tensor<double>&, const Tensor<double>&);
template double psnr(const Tensor<float>&, const Tensor<float>&);
template double psnr(const Tensor<double>&, const Tensor<double>&);
template double ssim(const Tensor<float>&, const Tensor<float>&);
template double ssim(const Tensor<double>&, const Tensor<double>&);
template QualityReport quality(const Tensor<float>&, const Tensor<float>&);
template QualityReport quality(const Tensor<double>&, const Tensor<double>&);

}  // namespace ape
