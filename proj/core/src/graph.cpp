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

#include "psw/ad/graph.hpp"

#include <unordered_set>

namespace psw::ad {

namespace {
thread_local bool g_gradMode = true;
}  // namespace

Var Var::constant(Tensor value) {
  Var v;
  v.node_ = std::make_shared<detail::Node>();
  v.node_->value = std::move(value);
  return v;
}

Var Var::parameter(Tensor value, std::string name) {
  Var v = constant(std::move(value));
  v.node_->requiresGrad = true;
  v.node_->name = std::move(name);
  return v;
}

void Var::zeroGrad() {
  if (node_->gradReady) std::fill(node_->grad.data.begin(), node_->grad.data.end(), 0.0);
}

bool gradModeEnabled() { return g_gradMode; }

NoGradGuard::NoGradGuard() : previous_(g_gradMode) { g_gradMode = false; }
NoGradGuard::~NoGradGuard() { g_gradMode = previous_; }

void backward(const Var& loss) {
  PSW_CHECK(loss.defined(), "backward on undefined Var");
  PSW_CHECK(loss.value().numel() == 1, "backward requires a scalar loss");
  if (!loss.node_->tracked()) return;  // fully detached computation

  // Iterative postorder DFS over tracked parents.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  struct Frame {
    detail::Node* node;
    size_t next = 0;
  };
  std::vector<Frame> stack{{loss.node_.get()}};
  visited.insert(loss.node_.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.node->parents.size()) {
      detail::Node* p = f.node->parents[f.next++].get();
      if (p->tracked() && visited.insert(p).second) stack.push_back({p});
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }

  loss.node_->ensureGrad().data[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backprop) {
      n->ensureGrad();
      n->backprop(*n);
    }
  }
}

namespace detail {

Var makeOp(Tensor value, std::vector<Var> parents,
           std::function<void(Node&)> backprop) {
#ifndef NDEBUG
  PSW_CHECK(value.allFinite(), "op produced a non-finite tensor");
#endif
  bool track = gradModeEnabled();
  if (track) {
    track = false;
    for (const Var& p : parents)
      if (p.defined() && p.node_->tracked()) {
        track = true;
        break;
      }
  }
  Var out = Var::constant(std::move(value));
  if (track) {
    out.node_->parents.reserve(parents.size());
    for (Var& p : parents) out.node_->parents.push_back(std::move(p.node_));
    out.node_->backprop = std::move(backprop);
  }
  return out;
}

}  // namespace detail

}  // namespace psw::ad
