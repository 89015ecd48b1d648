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

#include "ape/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ape::kernels {

namespace {

// Output index range [lo, hi) for which in = out + offset stays in [0, extent).
inline void valid_range(std::ptrdiff_t offset, std::size_t extent, std::size_t out_extent,
                        std::size_t& lo, std::size_t& hi) {
  const std::ptrdiff_t l = std::max<std::ptrdiff_t>(0, -offset);
  const std::ptrdiff_t h = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(out_extent),
                                                    static_cast<std::ptrdiff_t>(extent) - offset);
  lo = static_cast<std::size_t>(l);
  hi = static_cast<std::size_t>(std::max(l, h));
}

}  // namespace

template <typename T>
ConvGeometry conv_geometry(const Tensor<T>& input, const Tensor<T>& weight,
                           const Tensor<T>& bias, std::size_t padding) {
  if (input.rank() != 4) throw ShapeError("conv2d: input must be 4-D, got " + shape_string(input.shape()));
  if (weight.rank() != 4 || weight.dim(2) != weight.dim(3)) {
    throw ShapeError("conv2d: weight must be (Cout,Cin,k,k), got " + shape_string(weight.shape()));
  }
  if (weight.dim(1) != input.dim(1)) {
    throw ShapeError("conv2d: input has " + std::to_string(input.dim(1)) +
                     " channels but weight expects " + std::to_string(weight.dim(1)));
  }
  if (bias.rank() != 1 || bias.dim(0) != weight.dim(0)) {
    throw ShapeError("conv2d: bias shape " + shape_string(bias.shape()) + " does not match Cout");
  }
  ConvGeometry g{input.dim(0), input.dim(1), weight.dim(0), input.dim(2),
                 input.dim(3), weight.dim(2), padding};
  if (g.height + 2 * padding < g.kernel || g.width + 2 * padding < g.kernel) {
    throw ShapeError("conv2d: kernel larger than padded input");
  }
  return g;
}

namespace {

// C[M x N] += A[M x K] * B[K x N], all row-major. The K sum for each
// element of C runs in ascending order regardless of tiling.
template <typename T, int MR, int NR>
inline void micro_tile(std::size_t K, const T* A, std::size_t lda, const T* B, std::size_t ldb,
                       T* C, std::size_t ldc) {
  T acc[MR][NR];
  for (int i = 0; i < MR; ++i)
    for (int j = 0; j < NR; ++j) acc[i][j] = C[i * ldc + j];
  for (std::size_t k = 0; k < K; ++k) {
    const T* b = B + k * ldb;
    for (int i = 0; i < MR; ++i) {
      const T a = A[i * lda + k];
      for (int j = 0; j < NR; ++j) acc[i][j] += a * b[j];
    }
  }
  for (int i = 0; i < MR; ++i)
    for (int j = 0; j < NR; ++j) C[i * ldc + j] = acc[i][j];
}

template <typename T, int MR>
void gemm_rows(std::size_t N, std::size_t K, const T* A, std::size_t lda, const T* B,
               std::size_t ldb, T* C, std::size_t ldc) {
  std::size_t j = 0;
  for (; j + 32 <= N; j += 32) micro_tile<T, MR, 32>(K, A, lda, B + j, ldb, C + j, ldc);
  for (; j + 8 <= N; j += 8) micro_tile<T, MR, 8>(K, A, lda, B + j, ldb, C + j, ldc);
  for (; j < N; ++j) micro_tile<T, MR, 1>(K, A, lda, B + j, ldb, C + j, ldc);
}

template <typename T>
void gemm_acc(std::size_t M, std::size_t N, std::size_t K, const T* A, std::size_t lda,
              const T* B, std::size_t ldb, T* C, std::size_t ldc) {
  std::size_t i = 0;
  for (; i + 4 <= M; i += 4) gemm_rows<T, 4>(N, K, A + i * lda, lda, B, ldb, C + i * ldc, ldc);
  for (; i < M; ++i) gemm_rows<T, 1>(N, K, A + i * lda, lda, B, ldb, C + i * ldc, ldc);
}

// Column panels of width kPanel are the unit of parallel work in the GEMMs.
constexpr std::size_t kPanel = 128;

template <typename T>
void parallel_gemm_acc(std::size_t M, std::size_t N, std::size_t K, const T* A, const T* B, T* C) {
  const std::ptrdiff_t panels = static_cast<std::ptrdiff_t>((N + kPanel - 1) / kPanel);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < panels; ++p) {
    const std::size_t j0 = static_cast<std::size_t>(p) * kPanel;
    const std::size_t n = std::min(kPanel, N - j0);
    gemm_acc(M, n, K, A, K, B + j0, N, C + j0, N);
  }
}

// col[(ci*k + ky)*k + kx][y*wo + x] = in[ci][y + ky - pad][x + kx - pad] (0 outside)
template <typename T>
void im2col(const T* in, const ConvGeometry& g, T* col) {
  const std::size_t ho = g.out_height(), wo = g.out_width(), k = g.kernel;
  const std::ptrdiff_t cin = static_cast<std::ptrdiff_t>(g.in_channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < cin; ++ci) {
    const T* ip = in + static_cast<std::size_t>(ci) * g.height * g.width;
    for (std::size_t ky = 0; ky < k; ++ky) {
      const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(ky) - static_cast<std::ptrdiff_t>(g.padding);
      std::size_t y0, y1;
      valid_range(dy, g.height, ho, y0, y1);
      for (std::size_t kx = 0; kx < k; ++kx) {
        const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - static_cast<std::ptrdiff_t>(g.padding);
        std::size_t x0, x1;
        valid_range(dx, g.width, wo, x0, x1);
        T* row = col + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * ho * wo;
        std::fill(row, row + ho * wo, T{0});
        for (std::size_t y = y0; y < y1; ++y) {
          const T* irow = ip + (static_cast<std::ptrdiff_t>(y) + dy) * static_cast<std::ptrdiff_t>(g.width) + dx;
          std::copy(irow + x0, irow + x1, row + y * wo + x0);
        }
      }
    }
  }
}

// Inverse scatter of im2col: grad_in[ci][y+dy][x+dx] += gcol[...][y*wo + x].
template <typename T>
void col2im_acc(const T* gcol, const ConvGeometry& g, T* grad_in) {
  const std::size_t ho = g.out_height(), wo = g.out_width(), k = g.kernel;
  const std::ptrdiff_t cin = static_cast<std::ptrdiff_t>(g.in_channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < cin; ++ci) {
    T* gp = grad_in + static_cast<std::size_t>(ci) * g.height * g.width;
    for (std::size_t ky = 0; ky < k; ++ky) {
      const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(ky) - static_cast<std::ptrdiff_t>(g.padding);
      std::size_t y0, y1;
      valid_range(dy, g.height, ho, y0, y1);
      for (std::size_t kx = 0; kx < k; ++kx) {
        const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - static_cast<std::ptrdiff_t>(g.padding);
        std::size_t x0, x1;
        valid_range(dx, g.width, wo, x0, x1);
        const T* row = gcol + ((static_cast<std::size_t>(ci) * k + ky) * k + kx) * ho * wo;
        for (std::size_t y = y0; y < y1; ++y) {
          T* grow = gp + (static_cast<std::ptrdiff_t>(y) + dy) * static_cast<std::ptrdiff_t>(g.width) + dx;
          const T* src = row + y * wo;
          for (std::size_t x = x0; x < x1; ++x) grow[x] += src[x];
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias, std::size_t padding) {
  const ConvGeometry g = conv_geometry(input, weight, bias, padding);
  const std::size_t P = g.out_height() * g.out_width();
  const std::size_t Kc = g.in_channels * g.kernel * g.kernel;
  Tensor<T> out({g.batch, g.out_channels, g.out_height(), g.out_width()});
  std::vector<T> col(Kc * P);
  for (std::size_t b = 0; b < g.batch; ++b) {
    im2col(input.raw() + b * g.in_channels * g.height * g.width, g, col.data());
    T* o = out.raw() + b * g.out_channels * P;
    for (std::size_t co = 0; co < g.out_channels; ++co) std::fill(o + co * P, o + (co + 1) * P, bias[co]);
    parallel_gemm_acc(g.out_channels, P, Kc, weight.raw(), col.data(), o);
  }
  return out;
}

template <typename T>
Tensor<T> conv2d_backward_input(const Tensor<T>& grad_out, const Tensor<T>& weight,
                                const ConvGeometry& g) {
  const std::size_t P = g.out_height() * g.out_width();
  const std::size_t Kc = g.in_channels * g.kernel * g.kernel;
  if (grad_out.shape() != Shape{g.batch, g.out_channels, g.out_height(), g.out_width()}) {
    throw ShapeError("conv2d backward: grad shape " + shape_string(grad_out.shape()));
  }
  // weight^T: (Kc x Cout)
  std::vector<T> wt(Kc * g.out_channels);
  for (std::size_t co = 0; co < g.out_channels; ++co)
    for (std::size_t r = 0; r < Kc; ++r) wt[r * g.out_channels + co] = weight[co * Kc + r];
  Tensor<T> grad_in({g.batch, g.in_channels, g.height, g.width});
  std::vector<T> gcol(Kc * P);
  for (std::size_t b = 0; b < g.batch; ++b) {
    std::fill(gcol.begin(), gcol.end(), T{0});
    parallel_gemm_acc(Kc, P, g.out_channels, wt.data(), grad_out.raw() + b * g.out_channels * P,
                      gcol.data());
    col2im_acc(gcol.data(), g, grad_in.raw() + b * g.in_channels * g.height * g.width);
  }
  return grad_in;
}

template <typename T>
void conv2d_backward_params(const Tensor<T>& grad_out, const Tensor<T>& input,
                            const ConvGeometry& g, Tensor<T>& grad_weight,
                            Tensor<T>& grad_bias) {
  const std::size_t P = g.out_height() * g.out_width();
  const std::size_t Kc = g.in_channels * g.kernel * g.kernel;
  std::vector<T> col(Kc * P);
  std::vector<T> colt(P * Kc);
  for (std::size_t b = 0; b < g.batch; ++b) {
    im2col(input.raw() + b * g.in_channels * g.height * g.width, g, col.data());
    for (std::size_t r = 0; r < Kc; ++r)
      for (std::size_t p = 0; p < P; ++p) colt[p * Kc + r] = col[r * P + p];
    // grad_weight (Cout x Kc) += grad_out_b (Cout x P) * col^T (P x Kc)
    parallel_gemm_acc(g.out_channels, Kc, P, grad_out.raw() + b * g.out_channels * P, colt.data(),
                      grad_weight.raw());
  }

  const std::ptrdiff_t cout = static_cast<std::ptrdiff_t>(g.out_channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t co = 0; co < cout; ++co) {
    T s{0};
    for (std::size_t b = 0; b < g.batch; ++b) {
      const T* go = grad_out.raw() + (b * g.out_channels + static_cast<std::size_t>(co)) * P;
      for (std::size_t i = 0; i < P; ++i) s += go[i];
    }
    grad_bias[static_cast<std::size_t>(co)] += s;
  }
}

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, std::size_t r) {
  if (x.rank() != 4) throw ShapeError("pixel_shuffle: input must be 4-D");
  if (r == 0 || x.dim(1) % (r * r) != 0) {
    throw ShapeError("pixel_shuffle: channels " + std::to_string(x.dim(1)) +
                     " not divisible by r^2 = " + std::to_string(r * r));
  }
  const std::size_t B = x.dim(0), C = x.dim(1) / (r * r), H = x.dim(2), W = x.dim(3);
  Tensor<T> out({B, C, H * r, W * r});
  const std::ptrdiff_t tasks = static_cast<std::ptrdiff_t>(B * C);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const std::size_t b = static_cast<std::size_t>(t) / C, c = static_cast<std::size_t>(t) % C;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        const T* src = x.raw() + ((b * C * r * r) + c * r * r + i * r + j) * H * W;
        for (std::size_t y = 0; y < H; ++y) {
          T* dst = out.raw() + ((b * C + c) * H * r + y * r + i) * W * r + j;
          for (std::size_t xx = 0; xx < W; ++xx) dst[xx * r] = src[y * W + xx];
        }
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& x, std::size_t r) {
  if (x.rank() != 4) throw ShapeError("pixel_unshuffle: input must be 4-D");
  if (r == 0 || x.dim(2) % r != 0 || x.dim(3) % r != 0) {
    throw ShapeError("pixel_unshuffle: spatial extents not divisible by r");
  }
  const std::size_t B = x.dim(0), C = x.dim(1), H = x.dim(2) / r, W = x.dim(3) / r;
  Tensor<T> out({B, C * r * r, H, W});
  const std::ptrdiff_t tasks = static_cast<std::ptrdiff_t>(B * C);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const std::size_t b = static_cast<std::size_t>(t) / C, c = static_cast<std::size_t>(t) % C;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        T* dst = out.raw() + ((b * C * r * r) + c * r * r + i * r + j) * H * W;
        for (std::size_t y = 0; y < H; ++y) {
          const T* src = x.raw() + ((b * C + c) * H * r + y * r + i) * W * r + j;
          for (std::size_t xx = 0; xx < W; ++xx) dst[y * W + xx] = src[xx * r];
        }
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x) {
  if (x.rank() != 4) throw ShapeError("global_avg_pool: input must be 4-D");
  const std::size_t B = x.dim(0), C = x.dim(1), hw = x.dim(2) * x.dim(3);
  Tensor<T> out({B, C});
  const std::ptrdiff_t tasks = static_cast<std::ptrdiff_t>(B * C);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const T* p = x.raw() + static_cast<std::size_t>(t) * hw;
    T s{0};
    for (std::size_t i = 0; i < hw; ++i) s += p[i];
    out[static_cast<std::size_t>(t)] = s / static_cast<T>(hw);
  }
  return out;
}

template <typename T>
Tensor<T> select_batch(const Tensor<T>& x, std::span<const std::size_t> rows) {
  if (x.rank() == 0 || rows.empty()) throw ShapeError("select_batch: empty selection");
  const std::size_t row = x.numel() / x.dim(0);
  Shape shape = x.shape();
  shape[0] = rows.size();
  std::vector<T> data(rows.size() * row);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= x.dim(0)) throw ShapeError("select_batch: row out of range");
    std::memcpy(data.data() + i * row, x.raw() + rows[i] * row, row * sizeof(T));
  }
  return Tensor<T>(std::move(shape), std::move(data));
}

template <typename T>
Tensor<T> stack(std::span<const Tensor<T>> items) {
  if (items.empty()) throw ShapeError("stack: no tensors");
  Shape shape{items.size()};
  shape.insert(shape.end(), items[0].shape().begin(), items[0].shape().end());
  std::vector<T> data;
  data.reserve(shape_numel(shape));
  for (const auto& t : items) {
    if (t.shape() != items[0].shape()) throw ShapeError("stack: shape mismatch");
    data.insert(data.end(), t.data().begin(), t.data().end());
  }
  return Tensor<T>(std::move(shape), std::move(data));
}

template <typename T>
Tensor<T> unstack_row(const Tensor<T>& x, std::size_t b) {
  if (x.rank() < 2 || b >= x.dim(0)) throw ShapeError("unstack_row: bad row");
  const std::size_t row = x.numel() / x.dim(0);
  Shape shape(x.shape().begin() + 1, x.shape().end());
  std::vector<T> data(x.raw() + b * row, x.raw() + (b + 1) * row);
  return Tensor<T>(std::move(shape), std::move(data));
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace reference {

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias, std::size_t padding) {
  const ConvGeometry g = conv_geometry(input, weight, bias, padding);
  const std::size_t ho = g.out_height(), wo = g.out_width();
  Tensor<T> out({g.batch, g.out_channels, ho, wo});
  for (std::size_t b = 0; b < g.batch; ++b)
    for (std::size_t co = 0; co < g.out_channels; ++co)
      for (std::size_t y = 0; y < ho; ++y)
        for (std::size_t x = 0; x < wo; ++x) {
          T acc = bias[co];
          for (std::size_t ci = 0; ci < g.in_channels; ++ci)
            for (std::size_t ky = 0; ky < g.kernel; ++ky)
              for (std::size_t kx = 0; kx < g.kernel; ++kx) {
                const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - static_cast<std::ptrdiff_t>(padding);
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - static_cast<std::ptrdiff_t>(padding);
                if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(g.height) ||
                    ix >= static_cast<std::ptrdiff_t>(g.width))
                  continue;
                acc += weight.at(co, ci, ky, kx) *
                       input.at(b, ci, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
              }
          out.at(b, co, y, x) = acc;
        }
  return out;
}

template <typename T>
Tensor<T> conv2d_backward_input(const Tensor<T>& grad_out, const Tensor<T>& weight,
                                const ConvGeometry& g) {
  const std::size_t ho = g.out_height(), wo = g.out_width();
  Tensor<T> grad_in({g.batch, g.in_channels, g.height, g.width});
  for (std::size_t b = 0; b < g.batch; ++b)
    for (std::size_t co = 0; co < g.out_channels; ++co)
      for (std::size_t y = 0; y < ho; ++y)
        for (std::size_t x = 0; x < wo; ++x)
          for (std::size_t ci = 0; ci < g.in_channels; ++ci)
            for (std::size_t ky = 0; ky < g.kernel; ++ky)
              for (std::size_t kx = 0; kx < g.kernel; ++kx) {
                const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - static_cast<std::ptrdiff_t>(g.padding);
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - static_cast<std::ptrdiff_t>(g.padding);
                if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(g.height) ||
                    ix >= static_cast<std::ptrdiff_t>(g.width))
                  continue;
                grad_in.at(b, ci, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix)) +=
                    weight.at(co, ci, ky, kx) * grad_out.at(b, co, y, x);
              }
  return grad_in;
}

template <typename T>
void conv2d_backward_params(const Tensor<T>& grad_out, const Tensor<T>& input,
                            const ConvGeometry& g, Tensor<T>& grad_weight,
                            Tensor<T>& grad_bias) {
  const std::size_t ho = g.out_height(), wo = g.out_width();
  for (std::size_t b = 0; b < g.batch; ++b)
    for (std::size_t co = 0; co < g.out_channels; ++co)
      for (std::size_t y = 0; y < ho; ++y)
        for (std::size_t x = 0; x < wo; ++x) {
          const T go = grad_out.at(b, co, y, x);
          grad_bias[co] += go;
          for (std::size_t ci = 0; ci < g.in_channels; ++ci)
            for (std::size_t ky = 0; ky < g.kernel; ++ky)
              for (std::size_t kx = 0; kx < g.kernel; ++kx) {
                const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - static_cast<std::ptrdiff_t>(g.padding);
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - static_cast<std::ptrdiff_t>(g.padding);
                if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(g.height) ||
                    ix >= static_cast<std::ptrdiff_t>(g.width))
                  continue;
                grad_weight.at(co, ci, ky, kx) +=
                    go * input.at(b, ci, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
              }
        }
}

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, std::size_t r) {
  if (x.rank() != 4 || r == 0 || x.dim(1) % (r * r) != 0) {
    throw ShapeError("pixel_shuffle: channels not divisible by r^2");
  }
  const std::size_t B = x.dim(0), C = x.dim(1) / (r * r), H = x.dim(2), W = x.dim(3);
  Tensor<T> out({B, C, H * r, W * r});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t oy = 0; oy < H * r; ++oy)
        for (std::size_t ox = 0; ox < W * r; ++ox)
          out.at(b, c, oy, ox) = x.at(b, c * r * r + (oy % r) * r + (ox % r), oy / r, ox / r);
  return out;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x) {
  const std::size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  Tensor<T> out({B, C});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c) {
      T s{0};
      for (std::size_t y = 0; y < H; ++y)
        for (std::size_t xx = 0; xx < W; ++xx) s += x.at(b, c, y, xx);
      out[b * C + c] = s / static_cast<T>(H * W);
    }
  return out;
}

}  // namespace reference

#define APE_INSTANTIATE_KERNELS(T)                                                          \
  template ConvGeometry conv_geometry(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                      std::size_t);                                         \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,   \
                                    std::size_t);                                           \
  template Tensor<T> conv2d_backward_input(const Tensor<T>&, const Tensor<T>&,              \
                                           const ConvGeometry&);                            \
  template void conv2d_backward_params(const Tensor<T>&, const Tensor<T>&,                  \
                                       const ConvGeometry&, Tensor<T>&, Tensor<T>&);        \
  template Tensor<T> pixel_shuffle(const Tensor<T>&, std::size_t);                          \
  template Tensor<T> pixel_unshuffle(const Tensor<T>&, std::size_t);                        \
  template Tensor<T> global_avg_pool(const Tensor<T>&);                                     \
  template Tensor<T> select_batch(const Tensor<T>&, std::span<const std::size_t>);          \
  template Tensor<T> stack(std::span<const Tensor<T>>);                                     \
  template Tensor<T> unstack_row(const Tensor<T>&, std::size_t);                            \
  namespace reference {                                                                     \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,   \
                                    std::size_t);                                           \
  template Tensor<T> conv2d_backward_input(const Tensor<T>&, const Tensor<T>&,              \
                                           const ConvGeometry&);                            \
  template void conv2d_backward_params(const Tensor<T>&, const Tensor<T>&,                  \
                                       const ConvGeometry&, Tensor<T>&, Tensor<T>&);        \
  template Tensor<T> pixel_shuffle(const Tensor<T>&, std::size_t);                          \
  template Tensor<T> global_avg_pool(const Tensor<T>&);                                     \
  }

APE_INSTANTIATE_KERNELS(float)
APE_INSTANTIATE_KERNELS(double)

#undef APE_INSTANTIATE_KERNELS

}  // namespace ape::kernels
