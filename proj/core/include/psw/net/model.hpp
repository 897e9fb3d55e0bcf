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

#ifndef PSW_NET_MODEL_HPP
#define PSW_NET_MODEL_HPP

#include <string>
#include <vector>

#include "psw/ad/ops.hpp"
#include "psw/geometry/psv.hpp"

namespace psw::net {

struct ConvSpec {
  int kernel = 3;
  int outChannels = 0;
};

/// Layer tables for the three sub-networks. The feature extractor runs
/// per plane with valid padding (each spatial dim shrinks by sum(k-1));
/// the correlator runs per plane pair on concatenated features with same
/// padding; the estimation head sees every plane's matching scores at
/// once and emits D pdf channels plus 2 confidence channels plus 1
/// occlusion channel.
struct ModelConfig {
  int depthLevels = 16;
  std::string preset;  // recorded in the manifest
  std::vector<ConvSpec> extractor;
  std::vector<ConvSpec> correlator;
  std::vector<ConvSpec> head;

  /// The published architecture: 10-layer extractor (kernels 13/9/5,
  /// channels up to 128), 8-layer 3x3 correlator to 16 channels, 4-layer
  /// 3x3 head. depthLevels selects the 16- or 64-level head variant
  /// (final channels 19 or 67). A 112x112 input patch maps to 32x32.
  static ModelConfig paper(int depthLevels);

  /// Reduced preset with the same three-stage structure, for desk-scale
  /// training and tests. Total valid-padding shrink is 4, so an N x N
  /// input patch maps to (N-4) x (N-4).
  static ModelConfig compact(int depthLevels);

  int extractorShrink() const;  // sum of (k-1) over extractor layers
  int margin() const { return extractorShrink() / 2; }
  int featureChannels() const { return extractor.back().outChannels; }
  int scoreChannels() const { return correlator.back().outChannels; }
  int headInputChannels() const { return scoreChannels() * depthLevels; }
  int headOutputChannels() const { return depthLevels + 3; }

  void validate() const;

  std::string toJson() const;
  static ModelConfig fromJson(const std::string& json);
};

/// Per-pair network output over the spatial output window.
struct DepthInference {
  ad::Var pdf;             // (1, D, h, w), softmax over depth
  ad::Var confidence;      // (1, 2, h, w), softmax over the two channels
  ad::Var occlusionLogit;  // (1, 1, h, w), normalized later across pairs

  int depthLevels() const { return pdf.shape()[1]; }
};

class Model {
 public:
  /// Fresh LeCun-normal initialization.
  Model(ModelConfig config, uint64_t seed);

  const ModelConfig& config() const { return config_; }

  std::vector<ad::Var>& params() { return params_; }
  const std::vector<ad::Var>& params() const { return params_; }
  /// Feature extraction + correlation parameters (frozen in phase two).
  std::vector<ad::Var> featureParams() const;
  std::vector<ad::Var> headParams() const;

  /// Runs the extractor on a batch of planes: (N, 3, h, w) ->
  /// (N, F, h - shrink, w - shrink). Planes share weights.
  ad::Var extractFeatures(const ad::Var& planes) const;

  /// Concatenates (fA, fB) along channels, fixed order, and scores each
  /// plane independently: (D, F, h, w) x2 -> (D, S, h, w).
  ad::Var correlateFeatures(const ad::Var& fa, const ad::Var& fb) const;

  /// Head over all planes' scores: (1, S*D, h, w) -> DepthInference.
  /// Channel layout of the input is plane-major (plane 0's S channels
  /// first), which is exactly reshape((D, S, h, w) -> (1, S*D, h, w)).
  DepthInference inferDepth(const ad::Var& scores) const;

  /// Full per-pair pass from a pair of PSV tensors (D, 3, H, W).
  DepthInference forwardPair(const ad::Tensor& psvA,
                             const ad::Tensor& psvB) const;

  /// Weights + JSON manifest (written next to the weights as
  /// `path + ".json"`).
  void save(const std::string& path, const std::string& phase) const;
  static Model load(const std::string& path);

  /// Carries extractor/correlator weights over from a phase-one
  /// checkpoint; head parameters keep their fresh initialization.
  void loadFeatureModules(const std::string& phase1Path);

 private:
  ModelConfig config_;
  std::vector<ad::ConvLayer> extractor_, correlator_, head_;
  std::vector<ad::Var> params_;
};

/// Packs images into a (N, 3, H, W) tensor.
ad::Tensor packPlanes(const std::vector<Image>& planes);

/// PSV planes as a (D, 3, H, W) tensor (invalid samples are already 0).
ad::Tensor psvToTensor(const PlaneSweepVolume& psv);

}  // namespace psw::net

#endif  // PSW_NET_MODEL_HPP
