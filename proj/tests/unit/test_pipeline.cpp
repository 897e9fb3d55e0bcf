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

#include <doctest.h>

#include <set>

#include "psw/pipeline/synthesize.hpp"
#include "psw/train/pairs.hpp"
#include "test_support.hpp"

using namespace psw;

namespace {

scene::SceneSpec twoPlaneScene() {
  scene::SceneSpec spec;
  spec.seed = 4;
  spec.dMin = 3;
  spec.dMax = 12;
  scene::PlanePrim far;
  far.depth = 9;
  far.xMin = -30;
  far.xMax = 30;
  far.yMin = -30;
  far.yMax = 30;
  far.texture.seed = 31;
  far.texture.scale = 0.6;
  scene::PlanePrim near;
  near.depth = 4.5;
  near.xMin = -2.0;
  near.xMax = 0.5;
  near.yMin = -2.0;
  near.yMax = 2.0;
  near.texture.seed = 32;
  near.texture.scale = 0.4;
  spec.planes = {far, near};
  spec.rig.count = 5;
  spec.rig.baseline = 0.3;
  spec.rig.width = 36;
  spec.rig.height = 28;
  spec.rig.fx = 40;
  spec.rig.fy = 40;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("synthesizeView produces well-formed, deterministic artifacts") {
  scene::SceneSpec spec = twoPlaneScene();
  scene::DatasetSample sample = scene::makeSample(spec);
  net::Model model(net::ModelConfig::compact(8), 5);

  pipeline::SynthesisOptions opt;
  opt.levels = makeDepthLevels(3, 12, 8, DepthSpacing::kInverseDepth);
  opt.pairs = train::buildPairs(sample, train::PairPolicy{});

  pipeline::SynthesisResult res = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);

  CHECK(res.finalImage.width == sample.target.width);
  CHECK(res.finalImage.height == sample.target.height);
  REQUIRE(res.pairs.size() == 3);
  for (const auto& p : res.pairs) {
    CHECK(p.fused.width == sample.target.width);
    CHECK(p.pdf.shape ==
          ad::Shape{8, sample.target.height, sample.target.width});
    CHECK(p.occlusionWeight.width == sample.target.width);
    for (double v : p.argmaxDepth.data) {
      CHECK(v >= 0);
      CHECK(v <= 7);
    }
  }
  // Occlusion weights are a partition of unity across pairs.
  for (int y = 0; y < res.finalImage.height; ++y)
    for (int x = 0; x < res.finalImage.width; ++x) {
      double sum = 0;
      for (const auto& p : res.pairs) sum += p.occlusionWeight.at(y, x);
      CHECK(std::fabs(sum - 1.0) < 1e-9);
    }

  pipeline::SynthesisResult rerun = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);
  CHECK(rerun.finalImage.data == res.finalImage.data);

  pipeline::SynthesisOptions bad = opt;
  bad.pairs = {{0, 9}};
  CHECK_THROWS_AS(
      pipeline::synthesizeView(sample.inputs, sample.inputCameras,
                               sample.targetCamera, model, bad),
      ConfigError);
  bad.pairs = {};
  CHECK_THROWS_AS(
      pipeline::synthesizeView(sample.inputs, sample.inputCameras,
                               sample.targetCamera, model, bad),
      ConfigError);
}

TEST_CASE("mr tiles partition the frame and reproduce identical levels") {
  scene::SceneSpec spec = twoPlaneScene();
  scene::DatasetSample sample = scene::makeSample(spec);

  // Zero weights give a uniform pdf; with D=8 every bin (1/8) passes any
  // in-band threshold, so the chosen range is the full span and the
  // re-inference equals a first pass run on the same tile geometry with
  // the base levels.
  net::Model model(net::ModelConfig::compact(8), 6);
  for (ad::Var& p : model.params())
    std::fill(p.mutableValue().data.begin(), p.mutableValue().data.end(), 0.0);

  pipeline::SynthesisOptions opt;
  opt.levels = makeDepthLevels(3, 12, 8, DepthSpacing::kInverseDepth);
  opt.pairs = {{0, 1}, {2, 3}};
  opt.multires = true;
  opt.mr.patchSize = 16;
  opt.mr.threshold = 1.0 / 30.0;

  pipeline::SynthesisResult res = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);
  REQUIRE(res.finalImageMr.has_value());

  // Partition: every tile/pair record, tiles cover the frame exactly.
  std::set<std::pair<int, int>> origins;
  long area = 0;
  for (const auto& t : res.mrTiles) {
    CHECK(!t.fullRangeFallback);
    CHECK(t.lo == opt.levels.dMin());
    CHECK(t.hi == opt.levels.dMax());
    if (t.pair == 0) {
      origins.insert({t.x0, t.y0});
      area += long(t.width) * t.height;
    }
  }
  CHECK(area == long(sample.target.width) * sample.target.height);
  CHECK(origins.size() == res.mrTiles.size() / opt.pairs.size());

  // Manual tile re-run with base levels reproduces the mr image exactly.
  const int margin = model.config().margin();
  for (auto [x0, y0] : std::vector<std::pair<int, int>>{{0, 0}, {16, 16}}) {
    int tw = std::min(16, sample.target.width - x0);
    int th = std::min(16, sample.target.height - y0);
    Camera tileCam = sample.targetCamera.cropped(
        x0 - margin, y0 - margin, tw + 2 * margin, th + 2 * margin);
    std::vector<compose::PairEstimate> ests;
    for (auto [a, b] : opt.pairs) {
      pipeline::PairForward pf = pipeline::forwardPairOnViewport(
          sample.inputs[size_t(a)], sample.inputCameras[size_t(a)],
          sample.inputs[size_t(b)], sample.inputCameras[size_t(b)], tileCam,
          model, opt.levels);
      ests.push_back(pf.estimate);
    }
    Image tile = compose::varToImage(compose::fusePairs(ests).image);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < th; ++y)
        for (int x = 0; x < tw; ++x)
          CHECK(tile.at(c, y, x) ==
                res.finalImageMr->at(c, y0 + y, x0 + x));
  }
}

TEST_CASE("one-hot first-pass pdf: the narrowed range brackets the truth") {
  // Fronto-parallel frame-filling plane exactly on a sweep level. With a
  // one-hot first-pass pdf at that level, every tile resamples inside the
  // bracketing neighbor range, so even a pdf-agnostic (uniform) second
  // pass cannot do worse than the uniform full-range blend.
  scene::SceneSpec spec = twoPlaneScene();
  spec.planes.resize(1);  // far plane only
  DepthLevels levels = makeDepthLevels(3, 12, 8, DepthSpacing::kInverseDepth);
  const int hot = levels.nearestIndex(spec.planes[0].depth = levels[5]);
  REQUIRE(hot == 5);
  scene::DatasetSample sample = scene::makeSample(spec);

  net::Model model(net::ModelConfig::compact(8), 9);
  for (ad::Var& p : model.params())
    std::fill(p.mutableValue().data.begin(), p.mutableValue().data.end(), 0.0);

  pipeline::SynthesisOptions opt;
  opt.levels = levels;
  opt.pairs = {{1, 2}};
  opt.multires = true;
  opt.mr.patchSize = 16;
  opt.mr.threshold = 1.0 / 100.0;

  // First pass with the uniform (zero-weight) model.
  pipeline::SynthesisResult first = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);
  double l1First = meanAbsDiff(first.finalImage, sample.target);

  // Hand the mr pass a one-hot pdf at the true level.
  ad::Tensor oneHot(
      ad::Shape{8, sample.target.height, sample.target.width}, 0.0);
  size_t plane = size_t(sample.target.height) * sample.target.width;
  std::fill(oneHot.data.begin() + size_t(hot) * plane,
            oneHot.data.begin() + size_t(hot + 1) * plane, 1.0);
  auto [mrImage, tiles] = pipeline::resampleAndReinfer(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt,
      {oneHot});
  double l1Mr = meanAbsDiff(mrImage, sample.target);

  for (const auto& t : tiles) {
    CHECK(t.singleHotExpanded);
    CHECK(t.lo == levels[hot - 1]);
    CHECK(t.hi == levels[hot + 1]);
    CHECK(t.lo <= spec.planes[0].depth);
    CHECK(t.hi >= spec.planes[0].depth);
  }
  CHECK(l1Mr <= l1First + 1e-6);
}

TEST_CASE("mr falls back to the full range when nothing passes") {
  // Uniform pdf over 64 levels: 1/64 < 1/30, so no bin passes and every
  // tile records the fallback.
  scene::SceneSpec spec = twoPlaneScene();
  spec.rig.width = 20;
  spec.rig.height = 16;
  scene::DatasetSample sample = scene::makeSample(spec);

  net::Model model(net::ModelConfig::compact(64), 8);
  for (ad::Var& p : model.params())
    std::fill(p.mutableValue().data.begin(), p.mutableValue().data.end(), 0.0);

  pipeline::SynthesisOptions opt;
  opt.levels = makeDepthLevels(3, 12, 64, DepthSpacing::kInverseDepth);
  opt.pairs = {{0, 1}};
  opt.multires = true;
  opt.mr.patchSize = 8;
  opt.mr.threshold = 1.0 / 30.0;

  pipeline::SynthesisResult res = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);
  REQUIRE(!res.mrTiles.empty());
  for (const auto& t : res.mrTiles) {
    CHECK(t.fullRangeFallback);
    CHECK(t.lo == opt.levels.dMin());
    CHECK(t.hi == opt.levels.dMax());
  }
}

TEST_CASE("forwardPairOnViewport reports PSV coverage") {
  scene::SceneSpec spec = twoPlaneScene();
  scene::DatasetSample sample = scene::makeSample(spec);
  net::Model model(net::ModelConfig::compact(8), 7);
  DepthLevels levels = makeDepthLevels(3, 12, 8, DepthSpacing::kInverseDepth);

  const int margin = model.config().margin();
  Camera inside = sample.targetCamera.cropped(-margin, -margin,
                                              16 + 2 * margin, 16 + 2 * margin);
  pipeline::PairForward pf = pipeline::forwardPairOnViewport(
      sample.inputs[0], sample.inputCameras[0], sample.inputs[1],
      sample.inputCameras[1], inside, model, levels);
  CHECK(pf.validFraction > 0.5);

  // A viewport far outside the frustum overlap has low coverage.
  Camera outside = sample.targetCamera.cropped(-200, -200, 16 + 2 * margin,
                                               16 + 2 * margin);
  pipeline::PairForward pfOut = pipeline::forwardPairOnViewport(
      sample.inputs[0], sample.inputCameras[0], sample.inputs[1],
      sample.inputCameras[1], outside, model, levels);
  CHECK(pfOut.validFraction < 0.1);

  DepthLevels wrong = makeDepthLevels(3, 12, 9, DepthSpacing::kInverseDepth);
  CHECK_THROWS(pipeline::forwardPairOnViewport(
      sample.inputs[0], sample.inputCameras[0], sample.inputs[1],
      sample.inputCameras[1], inside, model, wrong));
}

TEST_SUITE_END();
