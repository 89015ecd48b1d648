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

// Parallel kernels against their serial reference versions. Shapes follow
// the tiny preset at training size (batch 16, 16 channels, 16x16 LR patches)
// and a single 48x48 inference patch.

#include <benchmark/benchmark.h>

#include <random>

#include "ape/kernels.hpp"

namespace {

using ape::Tensor;
namespace k = ape::kernels;

Tensor<float> random_tensor(ape::Shape shape, std::uint64_t seed) {
  Tensor<float> t(std::move(shape));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (auto& v : t.data()) v = u(rng);
  return t;
}

struct ConvCase {
  Tensor<float> x, w, b;
  k::ConvGeometry g;
  Tensor<float> gy;
};

ConvCase make_case(const benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto side = static_cast<std::size_t>(state.range(1));
  const std::size_t c = 16;
  ConvCase cc{random_tensor({batch, c, side, side}, 1), random_tensor({c, c, 3, 3}, 2),
              random_tensor({c}, 3), {}, {}};
  cc.g = k::conv_geometry(cc.x, cc.w, cc.b, 1);
  cc.gy = random_tensor({batch, c, side, side}, 4);
  return cc;
}

void set_macs(benchmark::State& state, const ConvCase& cc) {
  const double macs = static_cast<double>(cc.g.batch * cc.g.in_channels * cc.g.out_channels * 9 *
                                          cc.g.out_height() * cc.g.out_width());
  state.counters["MAC/s"] =
      benchmark::Counter(macs, benchmark::Counter::kIsIterationInvariantRate, benchmark::Counter::kIs1000);
}

void BM_ConvForward(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::conv2d_forward(cc.x, cc.w, cc.b, 1));
  set_macs(state, cc);
}

void BM_ConvForwardReference(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::reference::conv2d_forward(cc.x, cc.w, cc.b, 1));
  set_macs(state, cc);
}

void BM_ConvBackwardInput(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::conv2d_backward_input(cc.gy, cc.w, cc.g));
  set_macs(state, cc);
}

void BM_ConvBackwardInputReference(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::reference::conv2d_backward_input(cc.gy, cc.w, cc.g));
  set_macs(state, cc);
}

void BM_ConvBackwardParams(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  Tensor<float> gw(cc.w.shape()), gb(cc.b.shape());
  for (auto _ : state) {
    k::conv2d_backward_params(cc.gy, cc.x, cc.g, gw, gb);
    benchmark::DoNotOptimize(gw.raw());
  }
  set_macs(state, cc);
}

void BM_ConvBackwardParamsReference(benchmark::State& state) {
  const ConvCase cc = make_case(state);
  Tensor<float> gw(cc.w.shape()), gb(cc.b.shape());
  for (auto _ : state) {
    k::reference::conv2d_backward_params(cc.gy, cc.x, cc.g, gw, gb);
    benchmark::DoNotOptimize(gw.raw());
  }
  set_macs(state, cc);
}

void BM_PixelShuffle(benchmark::State& state) {
  const Tensor<float> x = random_tensor({16, 64, 16, 16}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(k::pixel_shuffle(x, 2));
}

void BM_PixelShuffleReference(benchmark::State& state) {
  const Tensor<float> x = random_tensor({16, 64, 16, 16}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(k::reference::pixel_shuffle(x, 2));
}

#define CONV_ARGS ->Args({16, 16})->Args({1, 48})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_ConvForward) CONV_ARGS;
BENCHMARK(BM_ConvForwardReference) CONV_ARGS;
BENCHMARK(BM_ConvBackwardInput) CONV_ARGS;
BENCHMARK(BM_ConvBackwardInputReference) CONV_ARGS;
BENCHMARK(BM_ConvBackwardParams) CONV_ARGS;
BENCHMARK(BM_ConvBackwardParamsReference) CONV_ARGS;
BENCHMARK(BM_PixelShuffle);
BENCHMARK(BM_PixelShuffleReference);

}  // namespace

BENCHMARK_MAIN();
