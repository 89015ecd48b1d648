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

#include "ape/autograd.hpp"

#include <cmath>
#include <unordered_set>

#include "ape/kernels.hpp"

namespace ape {

template <typename T>
const Tensor<T>& Var<T>::grad() const {
  if (!node_->requires_grad) throw StateError("grad requested for a tensor without requires_grad");
  return node_->grad;
}

template <typename T>
Tensor<T>& Var<T>::mutable_grad() {
  if (!node_->requires_grad) throw StateError("grad requested for a tensor without requires_grad");
  return node_->grad;
}

namespace {

template <typename T>
using NodePtr = std::shared_ptr<Node<T>>;

template <typename T>
Var<T> make_op(Tensor<T> value, std::vector<NodePtr<T>> inputs,
               std::function<void(Node<T>&)> backward_fn) {
  auto n = std::make_shared<Node<T>>();
  n->value = std::move(value);
  for (const auto& in : inputs) n->requires_grad = n->requires_grad || in->requires_grad;
  if (n->requires_grad) {
    n->inputs = std::move(inputs);
    n->backward_fn = std::move(backward_fn);
  }
  return Var<T>(std::move(n));
}

template <typename T>
void accumulate(Node<T>& target, const Tensor<T>& g) {
  if (!target.requires_grad) return;
  if (target.grad.empty()) target.grad = Tensor<T>(target.value.shape());
  auto dst = target.grad.data();
  auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

template <typename T>
Tensor<T> scalar_tensor(T v) {
  return Tensor<T>(Shape{1}, std::vector<T>{v});
}

}  // namespace

template <typename T>
Tensor<T> relu_values(const Tensor<T>& x) {
  Tensor<T> out = x;
  for (auto& v : out.data()) v = v > T{0} ? v : T{0};
  return out;
}

template <typename T>
Tensor<T> tanh_values(const Tensor<T>& x) {
  Tensor<T> out = x;
  for (auto& v : out.data()) v = std::tanh(v);
  return out;
}

template <typename T>
Tensor<T> add_values(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  Tensor<T> out = a;
  auto o = out.data();
  auto bs = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bs[i];
  return out;
}

template <typename T>
Tensor<T> scale_values(const Tensor<T>& x, T s) {
  Tensor<T> out = x;
  for (auto& v : out.data()) v *= s;
  return out;
}

template <typename T>
Tensor<T> linear_values(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  if (x.rank() != 2 || weight.rank() != 2 || weight.dim(1) != x.dim(1) || bias.rank() != 1 ||
      bias.dim(0) != weight.dim(0)) {
    throw ShapeError("linear: incompatible shapes x" + shape_string(x.shape()) + " w" +
                     shape_string(weight.shape()) + " b" + shape_string(bias.shape()));
  }
  const std::size_t B = x.dim(0), C = x.dim(1), O = weight.dim(0);
  Tensor<T> out({B, O});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t o = 0; o < O; ++o) {
      T acc = bias[o];
      for (std::size_t c = 0; c < C; ++c) acc += weight[o * C + c] * x[b * C + c];
      out[b * O + o] = acc;
    }
  return out;
}

template <typename T>
Var<T> conv2d(const Var<T>& input, const Var<T>& weight, const Var<T>& bias, std::size_t padding) {
  const kernels::ConvGeometry g =
      kernels::conv_geometry(input.value(), weight.value(), bias.value(), padding);
  Tensor<T> out = kernels::conv2d_forward(input.value(), weight.value(), bias.value(), padding);
  return make_op<T>(std::move(out), {input.node(), weight.node(), bias.node()}, [g](Node<T>& self) {
    Node<T>& in = *self.inputs[0];
    Node<T>& w = *self.inputs[1];
    Node<T>& b = *self.inputs[2];
    if (in.requires_grad) accumulate(in, kernels::conv2d_backward_input(self.grad, w.value, g));
    if (w.requires_grad || b.requires_grad) {
      Tensor<T> gw(w.value.shape());
      Tensor<T> gb(b.value.shape());
      kernels::conv2d_backward_params(self.grad, in.value, g, gw, gb);
      accumulate(w, gw);
      accumulate(b, gb);
    }
  });
}

template <typename T>
Var<T> relu(const Var<T>& x) {
  return make_op<T>(relu_values(x.value()), {x.node()}, [](Node<T>& self) {
    Node<T>& in = *self.inputs[0];
    Tensor<T> g = self.grad;
    auto gd = g.data();
    auto xv = in.value.data();
    for (std::size_t i = 0; i < gd.size(); ++i)
      if (!(xv[i] > T{0})) gd[i] = T{0};
    accumulate(in, g);
  });
}

template <typename T>
Var<T> tanh_op(const Var<T>& x) {
  return make_op<T>(tanh_values(x.value()), {x.node()}, [](Node<T>& self) {
    Tensor<T> g = self.grad;
    auto gd = g.data();
    auto y = self.value.data();
    for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= T{1} - y[i] * y[i];
    accumulate(*self.inputs[0], g);
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  return make_op<T>(add_values(a.value(), b.value()), {a.node(), b.node()}, [](Node<T>& self) {
    accumulate(*self.inputs[0], self.grad);
    accumulate(*self.inputs[1], self.grad);
  });
}

template <typename T>
Var<T> scale(const Var<T>& x, T s) {
  return make_op<T>(scale_values(x.value(), s), {x.node()}, [s](Node<T>& self) {
    accumulate(*self.inputs[0], scale_values(self.grad, s));
  });
}

template <typename T>
Var<T> pixel_shuffle(const Var<T>& x, std::size_t r) {
  return make_op<T>(kernels::pixel_shuffle(x.value(), r), {x.node()}, [r](Node<T>& self) {
    accumulate(*self.inputs[0], kernels::pixel_unshuffle(self.grad, r));
  });
}

template <typename T>
Var<T> global_avg_pool(const Var<T>& x) {
  return make_op<T>(kernels::global_avg_pool(x.value()), {x.node()}, [](Node<T>& self) {
    Node<T>& in = *self.inputs[0];
    const std::size_t hw = in.value.dim(2) * in.value.dim(3);
    Tensor<T> g(in.value.shape());
    const T inv = T{1} / static_cast<T>(hw);
    for (std::size_t bc = 0; bc < self.grad.numel(); ++bc) {
      const T v = self.grad[bc] * inv;
      std::fill(g.raw() + bc * hw, g.raw() + (bc + 1) * hw, v);
    }
    accumulate(in, g);
  });
}

template <typename T>
Var<T> linear(const Var<T>& x, const Var<T>& weight, const Var<T>& bias) {
  Tensor<T> out = linear_values(x.value(), weight.value(), bias.value());
  return make_op<T>(std::move(out), {x.node(), weight.node(), bias.node()}, [](Node<T>& self) {
    Node<T>& xn = *self.inputs[0];
    Node<T>& wn = *self.inputs[1];
    Node<T>& bn = *self.inputs[2];
    const std::size_t B = xn.value.dim(0), C = xn.value.dim(1), O = wn.value.dim(0);
    const Tensor<T>& go = self.grad;
    if (xn.requires_grad) {
      Tensor<T> gx(xn.value.shape());
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t o = 0; o < O; ++o)
          for (std::size_t c = 0; c < C; ++c) gx[b * C + c] += go[b * O + o] * wn.value[o * C + c];
      accumulate(xn, gx);
    }
    if (wn.requires_grad) {
      Tensor<T> gw(wn.value.shape());
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t o = 0; o < O; ++o)
          for (std::size_t c = 0; c < C; ++c) gw[o * C + c] += go[b * O + o] * xn.value[b * C + c];
      accumulate(wn, gw);
    }
    if (bn.requires_grad) {
      Tensor<T> gb(bn.value.shape());
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t o = 0; o < O; ++o) gb[o] += go[b * O + o];
      accumulate(bn, gb);
    }
  });
}

template <typename T>
Var<T> sum(const Var<T>& x) {
  T s{0};
  for (T v : x.value().data()) s += v;
  return make_op<T>(scalar_tensor(s), {x.node()}, [](Node<T>& self) {
    Node<T>& in = *self.inputs[0];
    accumulate(in, Tensor<T>(in.value.shape(), self.grad[0]));
  });
}

template <typename T>
Var<T> l1_loss(const Var<T>& pred, const Var<T>& target, Reduction reduction) {
  require_same_shape(pred.value(), target.value(), "l1_loss");
  const auto p = pred.value().data();
  const auto t = target.value().data();
  T s{0};
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - t[i]);
  const T norm = reduction == Reduction::kMean ? T{1} / static_cast<T>(p.size()) : T{1};
  return make_op<T>(scalar_tensor(s * norm), {pred.node(), target.node()}, [norm](Node<T>& self) {
    Node<T>& pn = *self.inputs[0];
    Node<T>& tn = *self.inputs[1];
    const T g0 = self.grad[0] * norm;
    Tensor<T> gp(pn.value.shape());
    const auto pv = pn.value.data();
    const auto tv = tn.value.data();
    for (std::size_t i = 0; i < pv.size(); ++i) {
      const T d = pv[i] - tv[i];
      gp[i] = d > T{0} ? g0 : (d < T{0} ? -g0 : T{0});
    }
    if (pn.requires_grad) accumulate(pn, gp);
    if (tn.requires_grad) accumulate(tn, scale_values(gp, T{-1}));
  });
}

template <typename T>
Var<T> mse_loss(const Var<T>& pred, const Var<T>& target, Reduction reduction) {
  require_same_shape(pred.value(), target.value(), "mse_loss");
  const auto p = pred.value().data();
  const auto t = target.value().data();
  T s{0};
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  const T norm = reduction == Reduction::kMean ? T{1} / static_cast<T>(p.size()) : T{1};
  return make_op<T>(scalar_tensor(s * norm), {pred.node(), target.node()}, [norm](Node<T>& self) {
    Node<T>& pn = *self.inputs[0];
    Node<T>& tn = *self.inputs[1];
    const T g0 = self.grad[0] * norm * T{2};
    Tensor<T> gp(pn.value.shape());
    const auto pv = pn.value.data();
    const auto tv = tn.value.data();
    for (std::size_t i = 0; i < pv.size(); ++i) gp[i] = g0 * (pv[i] - tv[i]);
    if (pn.requires_grad) accumulate(pn, gp);
    if (tn.requires_grad) accumulate(tn, scale_values(gp, T{-1}));
  });
}

template <typename T>
void backward(const Var<T>& objective) {
  if (!objective.defined() || objective.value().numel() != 1) {
    throw ShapeError("backward: objective must be a scalar");
  }
  if (!objective.requires_grad()) return;

  // Iterative post-order DFS gives a topological order (inputs first).
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> seen;
  std::vector<std::pair<Node<T>*, std::size_t>> stack{{objective.node().get(), 0}};
  seen.insert(objective.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node<T>* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node<T>* n : order) {
    if (!n->is_leaf()) n->grad = Tensor<T>(n->value.shape());
  }
  accumulate(*objective.node(), scalar_tensor(T{1}));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
  }
}

#define APE_INSTANTIATE_AUTOGRAD(T)                                                      \
  template class Var<T>;                                                                 \
  template Tensor<T> relu_values(const Tensor<T>&);                                      \
  template Tensor<T> tanh_values(const Tensor<T>&);                                      \
  template Tensor<T> add_values(const Tensor<T>&, const Tensor<T>&);                     \
  template Tensor<T> scale_values(const Tensor<T>&, T);                                  \
  template Tensor<T> linear_values(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&); \
  template Var<T> conv2d(const Var<T>&, const Var<T>&, const Var<T>&, std::size_t);      \
  template Var<T> relu(const Var<T>&);                                                   \
  template Var<T> tanh_op(const Var<T>&);                                                \
  template Var<T> add(const Var<T>&, const Var<T>&);                                     \
  template Var<T> scale(const Var<T>&, T);                                               \
  template Var<T> pixel_shuffle(const Var<T>&, std::size_t);                             \
  template Var<T> global_avg_pool(const Var<T>&);                                        \
  template Var<T> linear(const Var<T>&, const Var<T>&, const Var<T>&);                   \
  template Var<T> sum(const Var<T>&);                                                    \
  template Var<T> l1_loss(const Var<T>&, const Var<T>&, Reduction);                      \
  template Var<T> mse_loss(const Var<T>&, const Var<T>&, Reduction);                     \
  template void backward(const Var<T>&);

APE_INSTANTIATE_AUTOGRAD(float)
APE_INSTANTIATE_AUTOGRAD(double)

#undef APE_INSTANTIATE_AUTOGRAD

}  // namespace ape
