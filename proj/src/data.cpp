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

#include "ape/data.hpp"

#include <algorithm>

#include "ape/image_io.hpp"
#include "ape/kernels.hpp"
#include "ape/resample.hpp"

namespace ape {

namespace fs = std::filesystem;

fs::path lr_cache_dir(const fs::path& corpus, int scale) {
  fs::path c = corpus;
  if (!c.has_filename()) c = c.parent_path();
  return c.parent_path() / (c.filename().string() + "_LRx" + std::to_string(scale));
}

Tensor<float> crop_to_multiple(const Tensor<float>& hr, int scale) {
  const auto s = static_cast<std::size_t>(scale);
  const std::size_t h = hr.dim(1) / s * s, w = hr.dim(2) / s * s;
  if (h == 0 || w == 0) throw ShapeError("image smaller than the scale factor");
  if (h == hr.dim(1) && w == hr.dim(2)) return hr;
  return crop(hr, 0, 0, h, w);
}

DatasetIndex build_index(const fs::path& corpus, int scale, const std::string& split) {
  if (!fs::is_directory(corpus)) throw IoError("corpus directory not found: " + corpus.string());
  DatasetIndex index;
  index.split = split;
  index.scale = scale;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("corpus contains no PNG images: " + corpus.string());
  const fs::path cache = lr_cache_dir(corpus, scale);
  fs::create_directories(cache);
  for (const auto& f : files) {
    DatasetEntry entry{f, cache / f.filename()};
    if (!fs::exists(entry.lr_path)) {
      const Tensor<float> hr = crop_to_multiple(read_png(f), scale);
      write_png(entry.lr_path, bicubic_downsample(hr, scale));
    }
    index.entries.push_back(std::move(entry));
  }
  return index;
}

std::vector<ImagePair> load_pairs(const DatasetIndex& index) {
  std::vector<ImagePair> out;
  const auto s = static_cast<std::size_t>(index.scale);
  for (const auto& e : index.entries) {
    ImagePair p;
    p.name = e.hr_path.filename().string();
    p.lr = read_png(e.lr_path);
    const Tensor<float> hr = read_png(e.hr_path);
    if (hr.dim(1) < p.lr.dim(1) * s || hr.dim(2) < p.lr.dim(2) * s) {
      throw FormatError("LR cache entry " + e.lr_path.string() + " is larger than HR / scale");
    }
    p.hr = crop(hr, 0, 0, p.lr.dim(1) * s, p.lr.dim(2) * s);
    out.push_back(std::move(p));
  }
  return out;
}

AugmentDraw draw_augment(std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  AugmentDraw d;
  d.hflip = coin(rng);
  d.vflip = coin(rng);
  d.rot90 = coin(rng);
  return d;
}

Tensor<float> apply_augment(const Tensor<float>& img, const AugmentDraw& draw) {
  if (img.rank() != 3 || img.dim(1) != img.dim(2)) {
    throw ShapeError("augment: expected square (C,n,n), got " + shape_string(img.shape()));
  }
  const std::size_t C = img.dim(0), n = img.dim(1);
  Tensor<float> out(img.shape());
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t sy = y, sx = x;
        // out(y,x) = in(src); rotation is applied last, flips first
        if (draw.rot90) {
          const std::size_t ty = sx, tx = n - 1 - sy;
          sy = ty;
          sx = tx;
        }
        if (draw.vflip) sy = n - 1 - sy;
        if (draw.hflip) sx = n - 1 - sx;
        out[(c * n + y) * n + x] = img[(c * n + sy) * n + sx];
      }
  return out;
}

std::pair<Tensor<float>, Tensor<float>> augment(const Tensor<float>& hr, const Tensor<float>& lr,
                                                std::mt19937_64& rng) {
  const AugmentDraw d = draw_augment(rng);
  return {apply_augment(hr, d), apply_augment(lr, d)};
}

Batch sample_batch(const std::vector<ImagePair>& data, std::size_t batch_size, std::size_t hr_patch,
                   int scale, std::mt19937_64& rng, bool with_augment) {
  if (data.empty()) throw ConfigError("training data is empty");
  const auto s = static_cast<std::size_t>(scale);
  if (hr_patch % s != 0) throw ConfigError("hr_patch must be divisible by scale");
  const std::size_t lp = hr_patch / s;
  std::vector<Tensor<float>> lrs, hrs;
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const ImagePair& p = data[pick(rng)];
    if (p.lr.dim(1) < lp || p.lr.dim(2) < lp) {
      throw ConfigError("image " + p.name + " is smaller than the LR training patch");
    }
    std::uniform_int_distribution<std::size_t> ty(0, p.lr.dim(1) - lp), tx(0, p.lr.dim(2) - lp);
    const std::size_t y = ty(rng), x = tx(rng);
    Tensor<float> lr = crop(p.lr, y, x, lp, lp);
    Tensor<float> hr = crop(p.hr, y * s, x * s, hr_patch, hr_patch);
    if (with_augment) std::tie(hr, lr) = augment(hr, lr, rng);
    lrs.push_back(std::move(lr));
    hrs.push_back(std::move(hr));
  }
  return Batch{kernels::stack<float>(lrs), kernels::stack<float>(hrs)};
}

}  // namespace ape
