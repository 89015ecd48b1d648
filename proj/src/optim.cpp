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

#include "ape/optim.hpp"

#include <cmath>

namespace ape {

template <typename T>
void adam_step(std::span<Parameter<T>* const> params, const AdamOptions& opt) {
  for (Parameter<T>* p : params) {
    p->step_count += 1;
    const double t = static_cast<double>(p->step_count);
    const double bc1 = 1.0 - std::pow(opt.beta1, t);
    const double bc2 = 1.0 - std::pow(opt.beta2, t);
    auto theta = p->var.mutable_value().data();
    auto grad = p->var.mutable_grad().data();
    auto m = p->adam_m.data();
    auto v = p->adam_v.data();
    const T b1 = static_cast<T>(opt.beta1), b2 = static_cast<T>(opt.beta2);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const T g = grad[i];
      m[i] = b1 * m[i] + (T{1} - b1) * g;
      v[i] = b2 * v[i] + (T{1} - b2) * g * g;
      const double m_hat = static_cast<double>(m[i]) / bc1;
      const double v_hat = static_cast<double>(v[i]) / bc2;
      theta[i] -= static_cast<T>(opt.lr * m_hat / (std::sqrt(v_hat) + opt.eps));
      grad[i] = T{0};
    }
  }
}

template void adam_step(std::span<Parameter<float>* const>, const AdamOptions&);
template void adam_step(std::span<Parameter<double>* const>, const AdamOptions&);

}  // namespace ape
