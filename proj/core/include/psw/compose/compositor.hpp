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

#ifndef PSW_COMPOSE_COMPOSITOR_HPP
#define PSW_COMPOSE_COMPOSITOR_HPP

#include <vector>

#include "psw/image.hpp"
#include "psw/net/model.hpp"

namespace psw::compose {

/// One image pair's view estimate. All members stay on the autodiff
/// graph so the training loss reaches the network outputs.
struct PairEstimate {
  ad::Var viewBarA;        // pdf-weighted blend of volume A, (1,3,h,w)
  ad::Var viewBarB;        // pdf-weighted blend of volume B
  ad::Var fused;           // confidence-weighted combination of the two
  ad::Var occlusionLogit;  // (1,1,h,w), raw until cross-pair softmax
};

/// Cross-pair fusion result.
struct FinalEstimate {
  ad::Var image;                     // (1,3,h,w)
  std::vector<Grid> perPairWeights;  // normalized occlusion weights, >= 0,
                                     // summing to 1 per pixel
};

/// Blends each volume by the estimated depth pdf and mixes the two
/// blends with the per-pixel confidences:
///   viewBar(x,y)  = sum_d vol(x,y,d) * pdf(x,y,d)
///   fused         = viewBarA * confA + viewBarB * confB
/// Volumes are (D, 3, h, w) at the output resolution; invalid PSV
/// samples contribute 0 (no pdf renormalization).
PairEstimate synthesizePerPair(const ad::Tensor& volumeA,
                               const ad::Tensor& volumeB,
                               const net::DepthInference& inference);

/// Softmax-normalizes the occlusion logits across pairs per pixel and
/// sums the weighted estimates. Throws on an empty list.
FinalEstimate fusePairs(const std::vector<PairEstimate>& estimates);

/// Eq.-style L1 prediction error: sum over pixels and channels of
/// |gt - pred|, as a graph scalar.
ad::Var l1Loss(const ad::Var& pred, const Image& groundTruth);

/// Evaluation convention: per-pixel-per-channel mean absolute error
/// scaled by 255.
double l1MetricX255(const Image& pred, const Image& gt);

// Conversions between (1,3,h,w) graph tensors and images.
Image varToImage(const ad::Var& v);
ad::Tensor imageTensor(const Image& img);  // (1,3,h,w)

/// Central spatial crop of a (D, C, H, W) volume by `margin` on every
/// side (matches the valid-padding shrink of the feature extractor).
ad::Tensor centralCrop(const ad::Tensor& volume, int margin);

}  // namespace psw::compose

#endif  // PSW_COMPOSE_COMPOSITOR_HPP
