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

#ifndef PSW_MR_MULTIRES_HPP
#define PSW_MR_MULTIRES_HPP

#include <vector>

#include "psw/ad/tensor.hpp"
#include "psw/geometry/depth_levels.hpp"

namespace psw::mr {

/// Adaptive depth-resampling parameters. The threshold band is the
/// empirically validated range; values outside it are rejected.
struct MrConfig {
  int patchSize = 32;
  double threshold = 1.0 / 100.0;
  DepthSpacing spacing = DepthSpacing::kInverseDepth;

  static constexpr double kThresholdLo = 1.0 / 200.0;
  static constexpr double kThresholdHi = 1.0 / 30.0;

  void validate() const;
};

/// Mean pdf over patchSize x patchSize regions: (D, H, W) ->
/// (D, ceil(H/p), ceil(W/p)). When H or W is not divisible by the patch
/// size, the pdf is padded by edge replication first, so each pooled
/// vector still sums to 1.
ad::Tensor pooledPdf(const ad::Tensor& pdf, int patchSize);

struct DepthRange {
  double lo = 0, hi = 0;
  bool fullRangeFallback = false;  // no bin passed the threshold
  bool singleHotExpanded = false;  // one bin passed; widened to neighbors
};

/// Range spanned by pooled bins with mass >= threshold. No passing bin
/// falls back to the full level range; a single passing bin expands to
/// its immediate neighbors (clamped at the ends).
DepthRange thresholdRange(const std::vector<double>& pooled,
                          const DepthLevels& levels, double threshold);

/// New levels with the same count inside `range`, clamped to the original
/// span. A degenerate range (lo == hi) is widened by +-5% of the depth.
DepthLevels resampleLevels(const DepthRange& range, const DepthLevels& original,
                           DepthSpacing spacing);

/// Pooled vector of one pdf patch region (helper over pooledPdf output).
std::vector<double> pooledVectorAt(const ad::Tensor& pooled, int py, int px);

}  // namespace psw::mr

#endif  // PSW_MR_MULTIRES_HPP
