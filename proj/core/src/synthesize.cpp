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

#include "psw/pipeline/synthesize.hpp"

#include <cmath>

#include "psw/geometry/psv.hpp"

namespace psw::pipeline {

PairForward forwardPairOnViewport(const Image& imageA, const Camera& cameraA,
                                  const Image& imageB, const Camera& cameraB,
                                  const Camera& inputViewport,
                                  const net::Model& model,
                                  const DepthLevels& levels) {
  PSW_CHECK(levels.count() == model.config().depthLevels,
            "depth level count must match the model variant");

  PlaneSweepVolume psvA = buildPSV(imageA, cameraA, inputViewport, levels);
  PlaneSweepVolume psvB = buildPSV(imageB, cameraB, inputViewport, levels);

  ad::Tensor tA = net::psvToTensor(psvA);
  ad::Tensor tB = net::psvToTensor(psvB);

  PairForward out;
  out.validFraction = std::min(psvA.validFraction(), psvB.validFraction());
  out.inference = model.forwardPair(tA, tB);

  int margin = model.config().margin();
  out.estimate = compose::synthesizePerPair(compose::centralCrop(tA, margin),
                                            compose::centralCrop(tB, margin),
                                            out.inference);
  return out;
}

namespace {

void checkOptions(const std::vector<Image>& inputs,
                  const std::vector<Camera>& inputCameras,
                  const SynthesisOptions& options) {
  PSW_CHECK(inputs.size() == inputCameras.size(),
            "inputs and cameras must pair up");
  if (options.pairs.empty())
    throw ConfigError("synthesizeView: no image pairs selected");
  for (auto [a, b] : options.pairs) {
    if (a < 0 || b < 0 || a >= int(inputs.size()) || b >= int(inputs.size()))
      throw ConfigError("synthesizeView: pair index out of range");
  }
}

Grid channelGrid(const ad::Var& v, int channel) {
  const ad::Shape& s = v.shape();
  Grid g(s[3], s[2]);
  const double* src =
      v.value().data.data() + size_t(channel) * s[2] * s[3];
  std::copy(src, src + g.data.size(), g.data.begin());
  return g;
}

ad::Tensor pdfTensor(const net::DepthInference& inf) {
  const ad::Shape& s = inf.pdf.shape();
  ad::Tensor t(ad::Shape{s[1], s[2], s[3]});
  t.data = inf.pdf.value().data;
  return t;
}

Grid argmaxGrid(const ad::Tensor& pdf) {
  int d = pdf.shape[0], h = pdf.shape[1], w = pdf.shape[2];
  Grid g(w, h);
  size_t plane = size_t(h) * w;
  for (size_t i = 0; i < plane; ++i) {
    int best = 0;
    double bv = pdf.data[i];
    for (int k = 1; k < d; ++k) {
      double v = pdf.data[size_t(k) * plane + i];
      if (v > bv) {
        bv = v;
        best = k;
      }
    }
    g.data[i] = double(best);
  }
  return g;
}

void blitImage(Image& dst, const Image& tile, int x0, int y0) {
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < tile.height; ++y)
      for (int x = 0; x < tile.width; ++x)
        dst.at(c, y0 + y, x0 + x) = tile.at(c, y, x);
}

}  // namespace

SynthesisResult synthesizeView(const std::vector<Image>& inputs,
                               const std::vector<Camera>& inputCameras,
                               const Camera& targetCamera,
                               const net::Model& model,
                               const SynthesisOptions& options) {
  checkOptions(inputs, inputCameras, options);
  ad::NoGradGuard inference;

  const int margin = model.config().margin();
  const int w = targetCamera.width();
  const int h = targetCamera.height();
  Camera expanded =
      targetCamera.cropped(-margin, -margin, w + 2 * margin, h + 2 * margin);

  SynthesisResult result;
  std::vector<compose::PairEstimate> estimates;
  std::vector<ad::Tensor> pdfs;
  for (auto [a, b] : options.pairs) {
    PairForward pf = forwardPairOnViewport(
        inputs[size_t(a)], inputCameras[size_t(a)], inputs[size_t(b)],
        inputCameras[size_t(b)], expanded, model, options.levels);
    estimates.push_back(pf.estimate);

    PairOutput po;
    po.fused = compose::varToImage(pf.estimate.fused);
    po.viewBarA = compose::varToImage(pf.estimate.viewBarA);
    po.viewBarB = compose::varToImage(pf.estimate.viewBarB);
    po.confidenceA = channelGrid(pf.inference.confidence, 0);
    po.pdf = pdfTensor(pf.inference);
    po.argmaxDepth = argmaxGrid(po.pdf);
    result.pairs.push_back(std::move(po));
    pdfs.push_back(result.pairs.back().pdf);
  }

  compose::FinalEstimate fused = compose::fusePairs(estimates);
  result.finalImage = compose::varToImage(fused.image);
  for (size_t i = 0; i < result.pairs.size(); ++i)
    result.pairs[i].occlusionWeight = fused.perPairWeights[i];

  if (options.multires) {
    auto [mrImage, tiles] = resampleAndReinfer(inputs, inputCameras,
                                               targetCamera, model, options,
                                               pdfs);
    result.finalImageMr = std::move(mrImage);
    result.mrTiles = std::move(tiles);
  }
  return result;
}

std::pair<Image, std::vector<TileRange>> resampleAndReinfer(
    const std::vector<Image>& inputs, const std::vector<Camera>& inputCameras,
    const Camera& targetCamera, const net::Model& model,
    const SynthesisOptions& options,
    const std::vector<ad::Tensor>& firstPassPdfs) {
  checkOptions(inputs, inputCameras, options);
  options.mr.validate();
  PSW_CHECK(firstPassPdfs.size() == options.pairs.size(),
            "resampleAndReinfer: one first-pass pdf per pair");
  ad::NoGradGuard inference;

  const int margin = model.config().margin();
  const int w = targetCamera.width();
  const int h = targetCamera.height();
  const int p = options.mr.patchSize;

  std::vector<ad::Tensor> pooled;
  pooled.reserve(firstPassPdfs.size());
  for (const ad::Tensor& pdf : firstPassPdfs) {
    PSW_CHECK(pdf.shape.rank() == 3 && pdf.shape[1] == h && pdf.shape[2] == w,
              "first-pass pdf must cover the target resolution");
    pooled.push_back(mr::pooledPdf(pdf, p));
  }

  Image mosaic(w, h);
  std::vector<TileRange> tiles;
  for (int y0 = 0; y0 < h; y0 += p) {
    for (int x0 = 0; x0 < w; x0 += p) {
      int tw = std::min(p, w - x0);
      int th = std::min(p, h - y0);
      Camera tileViewport = targetCamera.cropped(
          x0 - margin, y0 - margin, tw + 2 * margin, th + 2 * margin);

      std::vector<compose::PairEstimate> estimates;
      for (size_t pi = 0; pi < options.pairs.size(); ++pi) {
        auto [a, b] = options.pairs[pi];
        mr::DepthRange range =
            mr::thresholdRange(mr::pooledVectorAt(pooled[pi], y0 / p, x0 / p),
                               options.levels, options.mr.threshold);
        DepthLevels tileLevels =
            mr::resampleLevels(range, options.levels, options.mr.spacing);
        tiles.push_back({x0, y0, tw, th, int(pi), tileLevels.dMin(),
                         tileLevels.dMax(), range.fullRangeFallback,
                         range.singleHotExpanded});

        PairForward pf = forwardPairOnViewport(
            inputs[size_t(a)], inputCameras[size_t(a)], inputs[size_t(b)],
            inputCameras[size_t(b)], tileViewport, model, tileLevels);
        estimates.push_back(pf.estimate);
      }
      Image tile =
          compose::varToImage(compose::fusePairs(estimates).image);
      blitImage(mosaic, tile, x0, y0);
    }
  }
  return {std::move(mosaic), std::move(tiles)};
}

}  // namespace psw::pipeline
