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

#ifndef APE_DATA_HPP_
#define APE_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ape/tensor.hpp"

namespace ape {

struct DatasetEntry {
  std::filesystem::path hr_path;
  std::filesystem::path lr_path;
};

struct DatasetIndex {
  std::string split;  // "train" or "val"
  int scale = 2;
  std::vector<DatasetEntry> entries;
};

// "<corpus>_LRx<scale>" next to the corpus directory.
std::filesystem::path lr_cache_dir(const std::filesystem::path& corpus, int scale);

// Lists the PNGs of a corpus (sorted by filename) and creates any missing
// bicubic LR images in the cache directory. HR images are cropped to a
// multiple of `scale` before downsampling.
DatasetIndex build_index(const std::filesystem::path& corpus, int scale, const std::string& split);

struct ImagePair {
  std::string name;
  Tensor<float> hr;  // (3, s*h, s*w)
  Tensor<float> lr;  // (3, h, w)
};

// Loads every indexed pair; HR is cropped to exactly scale x the LR size.
std::vector<ImagePair> load_pairs(const DatasetIndex& index);

// Top-left crop of an HR image to sides divisible by `scale`.
Tensor<float> crop_to_multiple(const Tensor<float>& hr, int scale);

struct AugmentDraw {
  bool hflip = false;
  bool vflip = false;
  bool rot90 = false;
};

AugmentDraw draw_augment(std::mt19937_64& rng);

// Applies the drawn flips/rotation to one square (C,n,n) image.
Tensor<float> apply_augment(const Tensor<float>& img, const AugmentDraw& draw);

// Random horizontal flip, vertical flip and 90-degree rotation, each with
// probability 0.5, applied identically to both images.
std::pair<Tensor<float>, Tensor<float>> augment(const Tensor<float>& hr, const Tensor<float>& lr,
                                                std::mt19937_64& rng);

struct Batch {
  Tensor<float> lr;  // (B, 3, p, p)
  Tensor<float> hr;  // (B, 3, s*p, s*p)
};

// Uniformly random aligned crops from uniformly random images, augmented.
Batch sample_batch(const std::vector<ImagePair>& data, std::size_t batch_size, std::size_t hr_patch,
                   int scale, std::mt19937_64& rng, bool with_augment = true);

}  // namespace ape

#endif  // APE_DATA_HPP_
