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

#ifndef APE_TESTS_TEST_UTIL_HPP_
#define APE_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "ape/tensor.hpp"

namespace ape::testing {

// 64-bit LCG shared with tests/oracles/make_fixtures.py; yields the top byte.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : x_(seed) {}
  int next_byte() {
    x_ = x_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<int>(x_ >> 56);
  }

 private:
  std::uint64_t x_;
};

inline Tensor<int> lcg_bytes(Shape shape, std::uint64_t seed) {
  Tensor<int> t(std::move(shape));
  Lcg g(seed);
  for (auto& v : t.data()) v = g.next_byte();
  return t;
}

template <typename T>
Tensor<T> to_unit(const Tensor<int>& bytes) {
  Tensor<T> t(bytes.shape());
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = static_cast<T>(bytes[i]) / static_cast<T>(255);
  return t;
}

template <typename T>
Tensor<T> uniform(Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Tensor<T> t(std::move(shape));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& v : t.data()) v = static_cast<T>(u(rng));
  return t;
}

// Byte image and a blend 4:1 with independent noise.
inline std::pair<Tensor<double>, Tensor<double>> noise_pair(Shape shape, std::uint64_t seed) {
  const auto a = lcg_bytes(shape, seed);
  const auto n = lcg_bytes(shape, seed + 1);
  Tensor<int> b(shape);
  for (std::size_t i = 0; i < b.numel(); ++i) b[i] = (4 * a[i] + n[i]) / 5;
  return {to_unit<double>(a), to_unit<double>(b)};
}

template <typename T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    const double d = std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    if (d > m) m = d;
  }
  return m;
}

inline std::filesystem::path data_dir() { return APE_TEST_DATA_DIR; }

// Fresh per-test scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(APE_TEST_SCRATCH_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace ape::testing

#endif  // APE_TESTS_TEST_UTIL_HPP_
