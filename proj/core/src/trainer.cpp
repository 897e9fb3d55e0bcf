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

#include "psw/train/trainer.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

#include "psw/ad/checkpoint.hpp"
#include "psw/ad/optimizer.hpp"
#include "psw/compose/compositor.hpp"
#include "psw/geometry/psv.hpp"

namespace psw::train {

Phase phaseFromString(const std::string& s) {
  if (s == "one16" || s == "1") return Phase::kOne16;
  if (s == "two64" || s == "2") return Phase::kTwo64;
  throw ConfigError("phase must be one16 or two64, got '" + s + "'");
}

std::string toString(Phase p) {
  return p == Phase::kOne16 ? "one16" : "two64";
}

int phaseDepthLevels(Phase p) { return p == Phase::kOne16 ? 16 : 64; }

void TrainConfig::validate(int pairsPerView) const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (uniqueViews < 1) throw ConfigError("uniqueViews must be >= 1");
  if (minibatchPairs != uniqueViews * pairsPerView)
    throw ConfigError(
        "minibatchPairs must equal uniqueViews * pairsPerView (" +
        std::to_string(uniqueViews) + " * " + std::to_string(pairsPerView) +
        "), got " + std::to_string(minibatchPairs));
  if (mrFraction < 0.0 || mrFraction > 1.0)
    throw ConfigError("mrFraction must lie in [0, 1]");
  if (!(lr > 0)) throw ConfigError("learning rate must be positive");
  if (inputPatch < 1) throw ConfigError("inputPatch must be >= 1");
  if (!(dMin > 0 && dMin < dMax))
    throw ConfigError("train depth band requires 0 < dMin < dMax");
  if (minValidFraction < 0 || minValidFraction > 1)
    throw ConfigError("minValidFraction must lie in [0, 1]");
  mr::MrConfig{1, mrThreshold, spacing}.validate();
}

namespace {

struct ViewPlan {
  size_t sampleIndex;
  int ox, oy;                            // output window origin
  std::vector<DepthLevels> pairLevels;   // one per pair
  bool resampled;                        // mr re-presentation
};

struct ViewForward {
  ad::Var loss;
  double l1x255;
  std::vector<ad::Tensor> pairPdfs;  // (D, oh, ow), detached
};

// Forward of all pairs of one view window, fused, against the ground
// truth crop.
ViewForward forwardView(const scene::DatasetSample& sample,
                        const std::vector<std::pair<int, int>>& pairs,
                        const ViewPlan& plan, const net::Model& model,
                        int inputPatch) {
  const int margin = model.config().margin();
  const int outPatch = inputPatch - 2 * margin;
  Camera viewport = sample.targetCamera.cropped(
      plan.ox - margin, plan.oy - margin, inputPatch, inputPatch);

  std::vector<compose::PairEstimate> estimates;
  ViewForward out;
  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    auto [a, b] = pairs[pi];
    PlaneSweepVolume psvA =
        buildPSV(sample.inputs[size_t(a)], sample.inputCameras[size_t(a)],
                 viewport, plan.pairLevels[pi]);
    PlaneSweepVolume psvB =
        buildPSV(sample.inputs[size_t(b)], sample.inputCameras[size_t(b)],
                 viewport, plan.pairLevels[pi]);
    ad::Tensor tA = net::psvToTensor(psvA);
    ad::Tensor tB = net::psvToTensor(psvB);
    net::DepthInference inf = model.forwardPair(tA, tB);
    estimates.push_back(compose::synthesizePerPair(
        compose::centralCrop(tA, margin), compose::centralCrop(tB, margin),
        inf));

    const ad::Shape& ps = inf.pdf.shape();
    ad::Tensor pdf(ad::Shape{ps[1], ps[2], ps[3]});
    pdf.data = inf.pdf.value().data;
    out.pairPdfs.push_back(std::move(pdf));
  }

  compose::FinalEstimate fused = compose::fusePairs(estimates);
  Image gt = sample.target.crop(plan.ox, plan.oy, outPatch, outPatch);
  out.loss = compose::l1Loss(fused.image, gt);
  out.l1x255 = compose::l1MetricX255(compose::varToImage(fused.image), gt);
  return out;
}

double cropValidFraction(const scene::DatasetSample& sample,
                         const std::vector<std::pair<int, int>>& pairs,
                         const Camera& viewport, const DepthLevels& levels) {
  double lo = 1.0;
  for (auto [a, b] : pairs) {
    for (int idx : {a, b}) {
      PlaneSweepVolume psv =
          buildPSV(sample.inputs[size_t(idx)], sample.inputCameras[size_t(idx)],
                   viewport, levels);
      lo = std::min(lo, psv.validFraction());
    }
  }
  return lo;
}

}  // namespace

TrainResult trainPhase(const std::vector<scene::DatasetSample>& data,
                       const TrainConfig& cfg, const PairPolicy& policy,
                       net::Model& model, const std::string& rescuePath) {
  if (data.empty()) throw DataError("trainPhase: empty sample set");
  const auto pairs = buildPairs(data.front(), policy);
  cfg.validate(int(pairs.size()));
  if (model.config().depthLevels != phaseDepthLevels(cfg.phase))
    throw ConfigError("model has " +
                      std::to_string(model.config().depthLevels) +
                      " depth levels; phase " + toString(cfg.phase) +
                      " expects " + std::to_string(phaseDepthLevels(cfg.phase)));

  const int margin = model.config().margin();
  const int outPatch = cfg.inputPatch - 2 * margin;
  if (outPatch < 1)
    throw ConfigError("inputPatch too small for the extractor (needs > " +
                      std::to_string(2 * margin) + ")");
  const int w = data.front().target.width;
  const int h = data.front().target.height;
  if (outPatch > w || outPatch > h)
    throw ConfigError("output patch exceeds the target image");
  for (const auto& s : data) {
    if (buildPairs(s, policy).size() != pairs.size())
      throw DataError("samples disagree on pair count");
    if (s.target.width != w || s.target.height != h)
      throw DataError("samples disagree on resolution");
  }

  DepthLevels baseLevels = makeDepthLevels(
      cfg.dMin, cfg.dMax, model.config().depthLevels, cfg.spacing);
  std::vector<DepthLevels> basePerPair(pairs.size(), baseLevels);

  std::vector<ad::Var> trainable =
      cfg.freezeFeatureModules ? model.headParams() : model.params();
  ad::Adam adam(trainable,
                ad::AdamConfig{.lr = cfg.lr, .clipNorm = cfg.clipNorm});

  Rng rng(cfg.seed);
  std::vector<ViewPlan> carryover;  // fresh views of the previous iteration
  TrainResult result;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const int wantMr =
        int(std::lround(cfg.mrFraction * double(cfg.uniqueViews)));
    const int mrViews = std::min<int>(wantMr, int(carryover.size()));
    const int freshViews = cfg.uniqueViews - mrViews;

    std::vector<ViewPlan> plans;
    for (int i = 0; i < mrViews; ++i) {
      plans.push_back(std::move(carryover[size_t(i)]));
      plans.back().resampled = true;
    }
    for (int i = 0; i < freshViews; ++i) {
      ViewPlan plan;
      plan.resampled = false;
      plan.pairLevels = basePerPair;
      // Rejection-sample crops until the PSVs cover enough of the window.
      for (int attempt = 0; attempt < 20; ++attempt) {
        plan.sampleIndex = rng.below(data.size());
        plan.ox = int(rng.below(uint64_t(w - outPatch + 1)));
        plan.oy = int(rng.below(uint64_t(h - outPatch + 1)));
        Camera viewport = data[plan.sampleIndex].targetCamera.cropped(
            plan.ox - margin, plan.oy - margin, cfg.inputPatch,
            cfg.inputPatch);
        if (cropValidFraction(data[plan.sampleIndex], pairs, viewport,
                              baseLevels) >= cfg.minValidFraction)
          break;
      }
      plans.push_back(std::move(plan));
    }

    ad::Var loss;
    double l1Sum = 0;
    std::vector<ViewPlan> nextCarry;
    for (ViewPlan& plan : plans) {
      ViewForward vf = forwardView(data[plan.sampleIndex], pairs, plan, model,
                                   cfg.inputPatch);
      loss = loss.defined() ? ad::add(loss, vf.loss) : vf.loss;
      l1Sum += vf.l1x255;
      if (!plan.resampled) {
        // Narrow each pair's range from this iteration's pdf for the
        // next minibatch's resampled half.
        ViewPlan next = plan;
        for (size_t pi = 0; pi < pairs.size(); ++pi) {
          ad::Tensor pooled = mr::pooledPdf(vf.pairPdfs[pi], outPatch);
          mr::DepthRange range = mr::thresholdRange(
              mr::pooledVectorAt(pooled, 0, 0), baseLevels, cfg.mrThreshold);
          next.pairLevels[pi] =
              mr::resampleLevels(range, baseLevels, cfg.spacing);
        }
        nextCarry.push_back(std::move(next));
      }
    }

    double lossValue = loss.value().data[0];
    if (!std::isfinite(lossValue)) {
      if (!rescuePath.empty()) ad::saveCheckpoint(rescuePath, model.params());
      result.aborted = true;
      result.abortReason = "non-finite loss at iteration " +
                           std::to_string(iter) + "; last good weights kept";
      return result;
    }

    ad::backward(loss);
    double norm;
    try {
      norm = adam.step();
    } catch (const ad::GradientError& e) {
      if (!rescuePath.empty()) ad::saveCheckpoint(rescuePath, model.params());
      result.aborted = true;
      result.abortReason = e.what();
      return result;
    }
    adam.zeroGrad();

    carryover = std::move(nextCarry);
    result.curve.push_back({iter, lossValue,
                            l1Sum / double(cfg.uniqueViews), norm,
                            mrViews});
  }
  return result;
}

Schedule scheduleDefaults() {
  Schedule s;
  s.phase1.phase = Phase::kOne16;
  s.phase1.iterations = 5000;  // desk scale, not the published schedule
  s.phase1.freezeFeatureModules = false;

  s.phase2.phase = Phase::kTwo64;
  s.phase2.iterations = 2000;  // desk scale
  s.phase2.freezeFeatureModules = true;

  s.fullScalePhase1Iterations = 1000000;
  s.fullScalePhase2Iterations = 250000;
  return s;
}

void writeLossCurveCsv(const std::string& path,
                       const std::vector<IterationStats>& curve) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("cannot write loss curve: " + path);
  f << "iteration,loss_raw,l1_x255,grad_norm,mr_views\n";
  char buf[160];
  for (const IterationStats& s : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", s.iteration,
                  s.lossRaw, s.l1x255, s.gradNorm, s.mrViews);
    f << buf;
  }
}

void writeTrainManifest(const std::string& path, const TrainConfig& cfg,
                        const net::ModelConfig& modelCfg,
                        const std::string& parentCheckpoint,
                        const TrainResult& result) {
  nlohmann::json j{
      {"phase", toString(cfg.phase)},
      {"iterations", cfg.iterations},
      {"minibatch_pairs", cfg.minibatchPairs},
      {"unique_views", cfg.uniqueViews},
      {"mr_fraction", cfg.mrFraction},
      {"lr", cfg.lr},
      {"clip_norm", cfg.clipNorm},
      {"freeze_feature_modules", cfg.freezeFeatureModules},
      {"seed", cfg.seed},
      {"input_patch", cfg.inputPatch},
      {"depth_band", {cfg.dMin, cfg.dMax}},
      {"spacing", toString(cfg.spacing)},
      {"mr_threshold", cfg.mrThreshold},
      {"model", nlohmann::json::parse(modelCfg.toJson())},
      {"parent_checkpoint", parentCheckpoint},
      {"aborted", result.aborted},
      {"abort_reason", result.abortReason},
      {"final_l1_x255",
       result.curve.empty() ? 0.0 : result.curve.back().l1x255},
  };
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("cannot write train manifest: " + path);
  f << j.dump(2) << '\n';
}

}  // namespace psw::train
