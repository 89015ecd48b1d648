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

#ifndef APE_AUTOGRAD_HPP_
#define APE_AUTOGRAD_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "ape/tensor.hpp"

// Reverse-mode differentiation over the handful of ops the multi-exit SR
// network needs. Graphs are built eagerly: every op computes its value
// immediately and, when any input requires a gradient, records a closure that
// pushes the output gradient back into its inputs.

namespace ape {

template <typename T>
struct Node {
  Tensor<T> value;
  Tensor<T> grad;  // allocated iff requires_grad
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const { return inputs.empty(); }
};

template <typename T>
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  static Var leaf(Tensor<T> value, bool requires_grad = false) {
    auto n = std::make_shared<Node<T>>();
    n->requires_grad = requires_grad;
    if (requires_grad) n->grad = Tensor<T>(value.shape());
    n->value = std::move(value);
    return Var(std::move(n));
  }

  bool defined() const { return node_ != nullptr; }
  const Tensor<T>& value() const { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }

  const Tensor<T>& grad() const;
  Tensor<T>& mutable_grad();
  // Parameters are updated in place by the optimizer and by checkpoint loads.
  Tensor<T>& mutable_value() { return node_->value; }

  void zero_grad() {
    if (node_->requires_grad) node_->grad.fill(T{0});
  }

  // Same value, cut off from the graph.
  Var detach() const { return leaf(node_->value, false); }

  const std::shared_ptr<Node<T>>& node() const { return node_; }

 private:
  std::shared_ptr<Node<T>> node_;
};

enum class Reduction { kMean, kSum };

template <typename T>
Var<T> conv2d(const Var<T>& input, const Var<T>& weight, const Var<T>& bias,
              std::size_t padding);
template <typename T>
Var<T> relu(const Var<T>& x);
template <typename T>
Var<T> tanh_op(const Var<T>& x);
template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> scale(const Var<T>& x, T s);
template <typename T>
Var<T> pixel_shuffle(const Var<T>& x, std::size_t r);
template <typename T>
Var<T> global_avg_pool(const Var<T>& x);
// x (B,C), weight (O,C), bias (O) -> (B,O)
template <typename T>
Var<T> linear(const Var<T>& x, const Var<T>& weight, const Var<T>& bias);
template <typename T>
Var<T> sum(const Var<T>& x);
template <typename T>
Var<T> l1_loss(const Var<T>& pred, const Var<T>& target,
               Reduction reduction = Reduction::kMean);
template <typename T>
Var<T> mse_loss(const Var<T>& pred, const Var<T>& target,
                Reduction reduction = Reduction::kMean);

// Seeds d(objective)/d(objective) = 1 and accumulates gradients into every
// reachable node that requires one. Leaf gradients accumulate across calls.
template <typename T>
void backward(const Var<T>& objective);

// Elementwise helpers used by both the graph ops and the inference path.
template <typename T>
Tensor<T> relu_values(const Tensor<T>& x);
template <typename T>
Tensor<T> tanh_values(const Tensor<T>& x);
template <typename T>
Tensor<T> add_values(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> scale_values(const Tensor<T>& x, T s);
template <typename T>
Tensor<T> linear_values(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

}  // namespace ape

#endif  // APE_AUTOGRAD_HPP_
