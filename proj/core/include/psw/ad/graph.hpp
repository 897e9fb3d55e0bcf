// Copyright 2026 the pswsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSW_AD_GRAPH_HPP
#define PSW_AD_GRAPH_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "psw/ad/tensor.hpp"

namespace psw::ad {

namespace detail {

struct Node {
  Tensor value;
  Tensor grad;  // allocated on first use
  bool requiresGrad = false;
  bool gradReady = false;
  std::string name;  // parameters only
  std::vector<std::shared_ptr<Node>> parents;
  // Scatters this node's grad into the parents' grads.
  std::function<void(Node&)> backprop;

  /// Tracked nodes participate in reverse mode: parameters and any op
  /// output recorded with parents.
  bool tracked() const { return requiresGrad || !parents.empty(); }

  Tensor& ensureGrad() {
    if (!gradReady) {
      grad = Tensor(value.shape, 0.0);
      gradReady = true;
    }
    return grad;
  }
};

}  // namespace detail

/// Handle to a node of the dynamically recorded compute graph. Copying a
/// Var aliases the node (shared ownership); the graph lives as long as
/// some Var references its sink.
class Var {
 public:
  Var() = default;

  /// Leaf with no gradient; backward treats it as detached.
  static Var constant(Tensor value);

  /// Trainable leaf; gradients accumulate across backward calls until
  /// zeroGrad().
  static Var parameter(Tensor value, std::string name);

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutableValue() { return node_->value; }
  const Shape& shape() const { return node_->value.shape; }
  bool requiresGrad() const { return node_ && node_->requiresGrad; }
  const std::string& name() const { return node_->name; }

  /// Gradient buffer (zeros if backward never reached this node).
  const Tensor& grad() const { return node_->ensureGrad(); }
  Tensor& mutableGrad() { return node_->ensureGrad(); }
  void zeroGrad();

  /// Value copy detached from the graph.
  Var detached() const { return constant(node_->value); }

  std::shared_ptr<detail::Node> node_;  // op constructors need raw access
};

/// True while ops should record the graph; cleared inside NoGradGuard.
bool gradModeEnabled();

/// RAII guard disabling graph recording (inference mode).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Reverse-mode sweep from a scalar loss (numel == 1). Accumulates into
/// the grads of every tracked node reachable through parents.
void backward(const Var& loss);

namespace detail {
/// Shared helper for op constructors: wraps `value` in a node recording
/// `parents` and `backprop` when grad mode is on and any parent is
/// tracked; otherwise returns a detached constant.
Var makeOp(Tensor value, std::vector<Var> parents,
           std::function<void(Node&)> backprop);
}  // namespace detail

}  // namespace psw::ad

#endif  // PSW_AD_GRAPH_HPP
