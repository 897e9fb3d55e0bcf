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

#ifndef PSW_AD_OPS_HPP
#define PSW_AD_OPS_HPP

#include <vector>

#include "psw/ad/graph.hpp"

namespace psw::ad {

enum class Padding { kValid, kSame };

// SELU constants (self-normalizing networks).
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

/// Stride-1 2-D convolution. x: (N, inC, H, W), weight: (outC, inC, k, k),
/// bias: (outC). Valid padding shrinks each spatial dim by k-1; same
/// padding zero-pads by (k-1)/2 and requires odd k.
Var conv2d(const Var& x, const Var& weight, const Var& bias, Padding padding);

Var selu(const Var& x);

/// Numerically stabilized softmax along `axis`.
Var softmax(const Var& x, int axis);

// Elementwise ops over identical shapes.
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& x, double s);

/// Sum of all entries -> scalar (shape {1}).
Var sumAll(const Var& x);

/// L1 prediction error: sum |pred - target| over every entry. Subgradient
/// at ties is 0.
Var l1Loss(const Var& pred, const Var& target);

/// Concatenate along the channel axis; all inputs (N, Ci, H, W).
Var concatChannels(const std::vector<Var>& xs);

/// Channel slice [c0, c1) of a rank-4 tensor.
Var sliceChannels(const Var& x, int c0, int c1);

/// Same data, new shape (numel preserved).
Var reshape(const Var& x, Shape shape);

/// Broadcast multiply: x (N, C, H, W) scaled per pixel by w (N, 1, H, W).
Var mulPlane(const Var& x, const Var& w);

/// Pdf-weighted plane blend: out(c,y,x) = sum_d volume(d,c,y,x) *
/// pdf(0,d,y,x). The volume is a fixed input (no gradient path).
Var pdfBlend(const Var& pdf, Tensor volume);

/// Occlusion-weighted fusion across pair estimates: per-pixel softmax of
/// the logits selects between estimates. estimates[i]: (1, C, H, W),
/// logits[i]: (1, 1, H, W).
Var fusePairs(const std::vector<Var>& estimates, const std::vector<Var>& logits);

/// Convolution layer with optional SELU, used by every sub-network.
struct ConvLayer {
  Var weight;  // (outC, inC, k, k)
  Var bias;    // (outC)
  Padding padding = Padding::kValid;
  bool seluAfter = true;

  int kernel() const { return weight.shape()[2]; }
  int inChannels() const { return weight.shape()[1]; }
  int outChannels() const { return weight.shape()[0]; }

  /// LeCun-normal init (std 1/sqrt(fan-in)), zero bias; the published
  /// companion initialization for SELU activations.
  static ConvLayer init(int inC, int outC, int k, Padding padding,
                        bool seluAfter, Rng& rng, const std::string& name);

  Var forward(const Var& x) const;
};

}  // namespace psw::ad

#endif  // PSW_AD_OPS_HPP
