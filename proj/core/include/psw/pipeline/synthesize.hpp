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

#ifndef PSW_PIPELINE_SYNTHESIZE_HPP
#define PSW_PIPELINE_SYNTHESIZE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "psw/compose/compositor.hpp"
#include "psw/mr/multires.hpp"
#include "psw/net/model.hpp"

namespace psw::pipeline {

/// One pair's forward pass over an input viewport: PSVs, inference, and
/// the composited estimate over the central output window (input window
/// minus the extractor margin on every side).
struct PairForward {
  net::DepthInference inference;
  compose::PairEstimate estimate;
  double validFraction = 0;  // min over both PSVs
};

/// `inputViewport` is the expanded virtual-camera window (output window
/// plus the extractor margin on each side). Gradients flow when grad
/// mode is on and the model parameters require them.
PairForward forwardPairOnViewport(const Image& imageA, const Camera& cameraA,
                                  const Image& imageB, const Camera& cameraB,
                                  const Camera& inputViewport,
                                  const net::Model& model,
                                  const DepthLevels& levels);

struct SynthesisOptions {
  DepthLevels levels;                       // base sweep
  std::vector<std::pair<int, int>> pairs;   // indices into the input list
  bool multires = false;
  mr::MrConfig mr;
};

/// Per-pair artifacts of the first pass (figure-style dumps).
struct PairOutput {
  Image fused;       // confidence-combined estimate of this pair
  Image viewBarA;    // pdf blend of volume A
  Image viewBarB;
  Grid occlusionWeight;  // normalized across pairs
  Grid confidenceA;      // C (C' = 1 - C)
  Grid argmaxDepth;      // per-pixel argmax level index
  ad::Tensor pdf;        // (D, H, W)
};

struct TileRange {
  int x0, y0, width, height;
  int pair;
  double lo, hi;
  bool fullRangeFallback;
  bool singleHotExpanded;
};

struct SynthesisResult {
  Image finalImage;
  std::vector<PairOutput> pairs;
  std::optional<Image> finalImageMr;
  std::vector<TileRange> mrTiles;
};

/// Full-view synthesis: builds expanded PSVs per pair, runs the network
/// once per pair (fully convolutional over the whole frame), fuses the
/// estimates, and optionally re-infers per tile with resampled depth
/// levels (multi-resolution second pass).
SynthesisResult synthesizeView(const std::vector<Image>& inputs,
                               const std::vector<Camera>& inputCameras,
                               const Camera& targetCamera,
                               const net::Model& model,
                               const SynthesisOptions& options);

/// The multi-resolution second pass on its own: narrows each pair's depth
/// range per tile from its first-pass pdf, rebuilds tile PSVs, re-infers,
/// re-fuses, and mosaics the tiles into a full image (hard tiling; every
/// output pixel written exactly once).
std::pair<Image, std::vector<TileRange>> resampleAndReinfer(
    const std::vector<Image>& inputs, const std::vector<Camera>& inputCameras,
    const Camera& targetCamera, const net::Model& model,
    const SynthesisOptions& options,
    const std::vector<ad::Tensor>& firstPassPdfs);

}  // namespace psw::pipeline

#endif  // PSW_PIPELINE_SYNTHESIZE_HPP
