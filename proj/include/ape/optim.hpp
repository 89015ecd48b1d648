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

#ifndef APE_OPTIM_HPP_
#define APE_OPTIM_HPP_

#include <cstdint>
#include <span>
#include <string>

#include "ape/autograd.hpp"

namespace ape {

// A named trainable tensor plus its Adam moment estimates.
template <typename T>
struct Parameter {
  std::string name;
  Var<T> var;
  Tensor<T> adam_m;
  Tensor<T> adam_v;
  std::int64_t step_count = 0;

  Parameter() = default;
  Parameter(std::string n, Tensor<T> init)
      : name(std::move(n)),
        var(Var<T>::leaf(init, true)),
        adam_m(init.shape()),
        adam_v(init.shape()) {}

  const Tensor<T>& value() const { return var.value(); }
  std::size_t numel() const { return var.value().numel(); }
};

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update per parameter, then clears the gradients.
template <typename T>
void adam_step(std::span<Parameter<T>* const> params, const AdamOptions& opt);

template <typename T>
void zero_grad(std::span<Parameter<T>* const> params) {
  for (auto* p : params) p->var.zero_grad();
}

}  // namespace ape

#endif  // APE_OPTIM_HPP_
