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

#include "psw/ad/optimizer.hpp"

#include <cmath>

namespace psw::ad {

Adam::Adam(std::vector<Var> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Var& p : params_) {
    PSW_CHECK(p.requiresGrad(), "Adam expects trainable parameters");
    m_.emplace_back(p.shape(), 0.0);
    v_.emplace_back(p.shape(), 0.0);
  }
}

double gradNorm(const std::vector<Var>& params) {
  double sq = 0;
  for (const Var& p : params)
    for (double g : p.grad().data) sq += g * g;
  return std::sqrt(sq);
}

double Adam::step() {
  for (const Var& p : params_) {
    if (!p.grad().allFinite())
      throw GradientError("non-finite gradient in parameter '" + p.name() +
                          "'; step rejected");
  }

  double norm = gradNorm(params_);
  double clipScale = 1.0;
  if (cfg_.clipNorm > 0 && !cfg_.clipPerValue && norm > cfg_.clipNorm)
    clipScale = cfg_.clipNorm / norm;

  ++step_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, double(step_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, double(step_));

  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& val = params_[i].mutableValue();
    const Tensor& grad = params_[i].grad();
    Tensor& m = m_[i];
    Tensor& v = v_[i];
    for (size_t j = 0; j < val.numel(); ++j) {
      double g = grad.data[j] * clipScale;
      if (cfg_.clipPerValue && cfg_.clipNorm > 0)
        g = std::clamp(g, -cfg_.clipNorm, cfg_.clipNorm);
      m.data[j] = cfg_.beta1 * m.data[j] + (1.0 - cfg_.beta1) * g;
      v.data[j] = cfg_.beta2 * v.data[j] + (1.0 - cfg_.beta2) * g * g;
      double mHat = m.data[j] / bc1;
      double vHat = v.data[j] / bc2;
      val.data[j] -= cfg_.lr * mHat / (std::sqrt(vHat) + cfg_.epsilon);
    }
  }
  return norm;
}

void Adam::zeroGrad() {
  for (Var& p : params_) p.zeroGrad();
}

}  // namespace psw::ad
