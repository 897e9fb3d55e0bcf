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

#ifndef PSW_AD_OPTIMIZER_HPP
#define PSW_AD_OPTIMIZER_HPP

#include <vector>

#include "psw/ad/graph.hpp"

namespace psw::ad {

/// Gradient step is rejected (parameters untouched) on non-finite input.
class GradientError : public std::runtime_error {
 public:
  explicit GradientError(const std::string& what)
      : std::runtime_error(what) {}
};

struct AdamConfig {
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clipNorm = 1.0;      // <= 0 disables clipping
  bool clipPerValue = false;  // clamp each entry to [-clipNorm, clipNorm]
};

/// Adam with bias correction, preceded by global gradient-norm clipping.
class Adam {
 public:
  Adam(std::vector<Var> params, AdamConfig cfg);

  /// Clips, then applies one update from the parameters' current grads.
  /// Returns the pre-clip global gradient norm. Throws GradientError on
  /// non-finite gradients; parameters and moments stay untouched.
  double step();

  void zeroGrad();

  int64_t stepCount() const { return step_; }
  const AdamConfig& config() const { return cfg_; }
  const std::vector<Var>& params() const { return params_; }

 private:
  std::vector<Var> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig cfg_;
  int64_t step_ = 0;
};

/// Global L2 norm over a parameter set's gradients.
double gradNorm(const std::vector<Var>& params);

}  // namespace psw::ad

#endif  // PSW_AD_OPTIMIZER_HPP
