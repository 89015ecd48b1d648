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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ape/autograd.hpp"
#include "ape/error.hpp"
#include "ape/kernels.hpp"
#include "ape/optim.hpp"
#include "gradcheck.hpp"
#include "test_util.hpp"

namespace ape {
namespace {

using testing::max_abs_diff;
using testing::uniform;

TEST(Tensor, RejectsZeroExtentAndSizeMismatch) {
  EXPECT_THROW(Tensor<float>({2, 0, 3}), ShapeError);
  EXPECT_THROW(Tensor<float>({2, 2}, std::vector<float>(3)), ShapeError);
  Tensor<float> t({2, 3}, 1.5f);
  EXPECT_EQ(t.numel(), 6u);
  EXPECT_EQ(t[5], 1.5f);
  EXPECT_THROW(t.reshaped({4}), ShapeError);
  EXPECT_EQ(t.reshaped({3, 2}).shape(), (Shape{3, 2}));
}

// Fast kernels against the serial reference.

struct ConvDims {
  std::size_t b, cin, cout, h, w, k, pad;
};

std::vector<ConvDims> conv_cases() {
  return {{1, 1, 1, 5, 5, 3, 1},  {2, 3, 4, 7, 6, 3, 1},  {3, 16, 16, 12, 12, 3, 1},
          {1, 5, 7, 9, 4, 1, 0},  {2, 4, 3, 6, 8, 3, 0},  {1, 16, 64, 10, 10, 3, 1},
          {4, 3, 16, 11, 13, 3, 1}, {1, 2, 2, 1, 1, 3, 1}, {2, 33, 9, 5, 7, 3, 1}};
}

// `tol` is per accumulated term; each check scales it by its reduction length.
template <typename T>
void check_conv_against_reference(double tol) {
  std::uint64_t seed = 10;
  for (const ConvDims& d : conv_cases()) {
    const auto x = uniform<T>({d.b, d.cin, d.h, d.w}, ++seed);
    const auto w = uniform<T>({d.cout, d.cin, d.k, d.k}, ++seed);
    const auto b = uniform<T>({d.cout}, ++seed);
    const auto g = kernels::conv_geometry(x, w, b, d.pad);
    const auto y = kernels::conv2d_forward(x, w, b, d.pad);
    const auto y_ref = kernels::reference::conv2d_forward(x, w, b, d.pad);
    ASSERT_EQ(y.shape(), y_ref.shape());
    EXPECT_LE(max_abs_diff(y, y_ref), tol * static_cast<double>(d.cin * d.k * d.k));

    const auto gy = uniform<T>(y.shape(), ++seed);
    EXPECT_LE(max_abs_diff(kernels::conv2d_backward_input(gy, w, g),
                           kernels::reference::conv2d_backward_input(gy, w, g)),
              tol * static_cast<double>(d.cout * d.k * d.k));
    Tensor<T> gw(w.shape()), gb(b.shape()), gw_ref(w.shape()), gb_ref(b.shape());
    kernels::conv2d_backward_params(gy, x, g, gw, gb);
    kernels::reference::conv2d_backward_params(gy, x, g, gw_ref, gb_ref);
    EXPECT_LE(max_abs_diff(gw, gw_ref), tol * static_cast<double>(d.b * d.h * d.w));
    EXPECT_LE(max_abs_diff(gb, gb_ref), tol * static_cast<double>(d.b * d.h * d.w));
  }
}

TEST(Kernels, ConvMatchesReferenceDouble) { check_conv_against_reference<double>(1e-14); }
TEST(Kernels, ConvMatchesReferenceFloat) { check_conv_against_reference<float>(1e-6); }

TEST(Kernels, ConvBackwardParamsAccumulates) {
  const auto x = uniform<double>({2, 3, 5, 5}, 1);
  const auto w = uniform<double>({4, 3, 3, 3}, 2);
  const auto b = uniform<double>({4}, 3);
  const auto g = kernels::conv_geometry(x, w, b, 1);
  const auto gy = uniform<double>({2, 4, 5, 5}, 4);
  Tensor<double> once(w.shape()), twice(w.shape()), gb1(b.shape()), gb2(b.shape());
  kernels::conv2d_backward_params(gy, x, g, once, gb1);
  kernels::conv2d_backward_params(gy, x, g, twice, gb2);
  kernels::conv2d_backward_params(gy, x, g, twice, gb2);
  for (std::size_t i = 0; i < once.numel(); ++i) EXPECT_NEAR(twice[i], 2.0 * once[i], 1e-12);
}

TEST(Kernels, ConvShapeErrors) {
  const Tensor<float> x({1, 3, 5, 5});
  EXPECT_THROW(kernels::conv2d_forward(x, Tensor<float>({2, 4, 3, 3}), Tensor<float>({2}), 1), ShapeError);
  EXPECT_THROW(kernels::conv2d_forward(x, Tensor<float>({2, 3, 3, 3}), Tensor<float>({3}), 1), ShapeError);
  EXPECT_THROW(kernels::conv2d_forward(x, Tensor<float>({2, 3, 7, 7}), Tensor<float>({2}), 0), ShapeError);
}

TEST(Kernels, ThreadCountInvariant) {
  const auto x = uniform<float>({3, 16, 20, 20}, 7);
  const auto w = uniform<float>({16, 16, 3, 3}, 8);
  const auto b = uniform<float>({16}, 9);
  const auto g = kernels::conv_geometry(x, w, b, 1);
  const int saved = kernels::num_threads();
  kernels::set_num_threads(1);
  const auto y1 = kernels::conv2d_forward(x, w, b, 1);
  const auto gx1 = kernels::conv2d_backward_input(y1, w, g);
  Tensor<float> gw1(w.shape()), gb1(b.shape());
  kernels::conv2d_backward_params(y1, x, g, gw1, gb1);
  kernels::set_num_threads(4);
  const auto y4 = kernels::conv2d_forward(x, w, b, 1);
  const auto gx4 = kernels::conv2d_backward_input(y4, w, g);
  Tensor<float> gw4(w.shape()), gb4(b.shape());
  kernels::conv2d_backward_params(y4, x, g, gw4, gb4);
  kernels::set_num_threads(saved);
  EXPECT_TRUE(y1 == y4);
  EXPECT_TRUE(gx1 == gx4);
  EXPECT_TRUE(gw1 == gw4);
  EXPECT_TRUE(gb1 == gb4);
}

TEST(Kernels, PixelShuffleLayoutAndInverse) {
  // Channel c*r*r + i*r + j lands at (c, y*r + i, x*r + j).
  Tensor<float> x({1, 4, 1, 1});
  for (std::size_t c = 0; c < 4; ++c) x[c] = static_cast<float>(c);
  const auto y = kernels::pixel_shuffle(x, 2);
  EXPECT_EQ(y.shape(), (Shape{1, 1, 2, 2}));
  EXPECT_EQ(y.at(0, 0, 0, 0), 0.0f);
  EXPECT_EQ(y.at(0, 0, 0, 1), 1.0f);
  EXPECT_EQ(y.at(0, 0, 1, 0), 2.0f);
  EXPECT_EQ(y.at(0, 0, 1, 1), 3.0f);

  for (std::size_t r : {2u, 3u}) {
    const auto z = uniform<float>({2, 3 * r * r, 4, 5}, r);
    const auto s = kernels::pixel_shuffle(z, r);
    EXPECT_TRUE(s == kernels::reference::pixel_shuffle(z, r));
    EXPECT_TRUE(kernels::pixel_unshuffle(s, r) == z);
  }
  EXPECT_THROW(kernels::pixel_shuffle(Tensor<float>({1, 3, 2, 2}), 2), ShapeError);
}

TEST(Kernels, GlobalAvgPoolMatchesReference) {
  const auto x = uniform<double>({3, 5, 7, 6}, 3);
  const auto p = kernels::global_avg_pool(x);
  EXPECT_EQ(p.shape(), (Shape{3, 5}));
  EXPECT_LE(max_abs_diff(p, kernels::reference::global_avg_pool(x)), 1e-15);
}

TEST(Kernels, SelectStackUnstack) {
  const auto x = uniform<float>({4, 2, 3, 3}, 5);
  const std::vector<std::size_t> rows = {3, 1};
  const auto s = kernels::select_batch<float>(x, rows);
  EXPECT_EQ(s.shape(), (Shape{2, 2, 3, 3}));
  EXPECT_TRUE(kernels::unstack_row(s, 0) == kernels::unstack_row(x, 3));
  EXPECT_TRUE(kernels::unstack_row(s, 1) == kernels::unstack_row(x, 1));
  std::vector<Tensor<float>> items = {kernels::unstack_row(x, 0), kernels::unstack_row(x, 1),
                                      kernels::unstack_row(x, 2), kernels::unstack_row(x, 3)};
  EXPECT_TRUE(kernels::stack<float>(items) == x);
  const std::vector<std::size_t> bad = {4};
  EXPECT_THROW(kernels::select_batch<float>(x, bad), ShapeError);
}

class Gradients : public ::testing::TestWithParam<std::string> {};

TEST_P(Gradients, MatchFiniteDifferences) {
  for (const auto& suite : testing::gradient_suites()) {
    if (suite.name != GetParam()) continue;
    for (int c = 0; c < testing::kFdCases; ++c) EXPECT_LE(suite.run(c), testing::kFdMaxRelErr) << "case " << c;
    return;
  }
  FAIL() << "no suite " << GetParam();
}

INSTANTIATE_TEST_SUITE_P(Ops, Gradients,
                         ::testing::Values("conv2d", "relu", "tanh", "add", "scale", "pixel_shuffle",
                                           "global_avg_pool", "linear", "sum", "l1_loss", "mse_loss",
                                           "residual_block"),
                         [](const auto& info) { return info.param; });

TEST(Autograd, TanhValue) {
  const auto y = tanh_values(Tensor<double>({1}, 0.5));
  EXPECT_DOUBLE_EQ(y[0], 0.46211715726000974);
}

TEST(Autograd, ReluGradientZeroAtZero) {
  auto x = Var<double>::leaf(Tensor<double>({3}, std::vector<double>{-1.0, 0.0, 2.0}), true);
  backward(sum(relu(x)));
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1], 0.0);
  EXPECT_EQ(x.grad()[2], 1.0);
}

TEST(Autograd, LeafGradientsAccumulateAcrossBackward) {
  auto x = Var<double>::leaf(Tensor<double>({2}, 1.0), true);
  const auto y = sum(scale(x, 3.0));
  backward(y);
  backward(y);
  EXPECT_EQ(x.grad()[0], 6.0);
  x.zero_grad();
  EXPECT_EQ(x.grad()[0], 0.0);
}

TEST(Autograd, SharedSubgraphGradients) {
  // y = sum(t + t) with t = tanh(x): gradient 2 (1 - tanh^2).
  auto x = Var<double>::leaf(Tensor<double>({1}, 0.3), true);
  const auto t = tanh_op(x);
  backward(sum(add(t, t)));
  const double th = std::tanh(0.3);
  EXPECT_NEAR(x.grad()[0], 2.0 * (1.0 - th * th), 1e-15);
}

TEST(Autograd, NoGradInputsBuildNoClosures) {
  const auto x = Var<double>::leaf(Tensor<double>({2}, 1.0));
  const auto y = tanh_op(x);
  EXPECT_FALSE(y.requires_grad());
  EXPECT_FALSE(static_cast<bool>(y.node()->backward_fn));
}

TEST(Autograd, ShapeMismatch) {
  const auto a = Var<double>::leaf(Tensor<double>({2}));
  const auto b = Var<double>::leaf(Tensor<double>({3}));
  EXPECT_THROW(add(a, b), ShapeError);
  EXPECT_THROW(mse_loss(a, b), ShapeError);
}

TEST(Adam, MatchesClosedFormForTwoSteps) {
  Parameter<double> p("w", Tensor<double>({3}, std::vector<double>{1.0, -2.0, 0.5}));
  std::vector<Parameter<double>*> ps = {&p};
  AdamOptions opt;
  opt.lr = 0.01;
  const std::vector<double> g1 = {0.5, -0.1, 0.0}, g2 = {-0.2, 0.3, 1.0};
  std::vector<double> theta = {1.0, -2.0, 0.5}, m(3, 0.0), v(3, 0.0);
  int t = 0;
  for (const auto& g : {g1, g2}) {
    for (std::size_t i = 0; i < 3; ++i) p.var.mutable_grad()[i] = g[i];
    adam_step<double>(ps, opt);
    ++t;
    for (std::size_t i = 0; i < 3; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      const double mh = m[i] / (1.0 - std::pow(0.9, t)), vh = v[i] / (1.0 - std::pow(0.999, t));
      theta[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(p.value()[i], theta[i], 1e-15);
      EXPECT_EQ(p.var.grad()[i], 0.0);
    }
  }
  // The first step moves each coordinate by lr * sign(g).
  EXPECT_EQ(p.step_count, 2);
}

}  // namespace
}  // namespace ape
