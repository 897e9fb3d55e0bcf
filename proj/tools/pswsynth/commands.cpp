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

#include "commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "psw/eval/metrics.hpp"
#include "psw/io/dataset.hpp"
#include "psw/io/image_io.hpp"
#include "psw/pipeline/synthesize.hpp"
#include "psw/train/trainer.hpp"

namespace psw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string zeroPad(const char* stem, int i, const char* ext = "") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%02d%s", stem, i, ext);
  return buf;
}

DepthLevels levelsFor(const scene::DatasetSample& sample, int depthLevels,
                      const CommonFlags& common) {
  double lo = common.dMin > 0 ? common.dMin : sample.depthBandMin;
  double hi = common.dMax > 0 ? common.dMax : sample.depthBandMax;
  if (!(lo > 0 && lo < hi))
    throw ConfigError(
        "no usable depth band; pass --dmin/--dmax or use data with a "
        "declared band");
  return makeDepthLevels(lo, hi, depthLevels,
                         depthSpacingFromString(common.spacing));
}

Grid argmaxToGray(const Grid& argmax, int depthLevels) {
  Grid g = argmax;
  double denom = depthLevels > 1 ? double(depthLevels - 1) : 1.0;
  for (double& v : g.data) v /= denom;
  return g;
}

}  // namespace

int runGenScene(const GenSceneArgs& args, const CommonFlags& common,
                bool seedGiven) {
  scene::SceneSpec spec = scene::SceneSpec::loadFile(args.specPath);
  if (args.samples < 1) throw ConfigError("--samples must be >= 1");
  uint64_t seed = seedGiven ? common.seed : spec.seed;

  fs::create_directories(args.outDir);
  Rng rng(seed);
  for (int i = 0; i < args.samples; ++i) {
    Rng sampleRng = rng.fork(uint64_t(i));
    Vec3 shift{sampleRng.uniform(-spec.rig.jitter.x, spec.rig.jitter.x),
               sampleRng.uniform(-spec.rig.jitter.y, spec.rig.jitter.y),
               sampleRng.uniform(-spec.rig.jitter.z, spec.rig.jitter.z)};
    scene::DatasetSample sample = scene::makeSample(spec, shift);
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%03d", i);
    io::writeSample((fs::path(args.outDir) / name).string(), sample,
                    common.format);
  }
  std::cout << "wrote " << args.samples << " sample(s) to " << args.outDir
            << "\n";
  return 0;
}

int runBuildPsv(const BuildPsvArgs& args, const CommonFlags& common) {
  scene::DatasetSample sample = io::readSample(args.dataPath);
  if (args.inputIndex < 0 || args.inputIndex >= int(sample.inputs.size()))
    throw ConfigError("--input index out of range (sample has " +
                      std::to_string(sample.inputs.size()) + " inputs)");
  int depths = common.depths > 0 ? common.depths : 16;
  DepthLevels levels = levelsFor(sample, depths, common);

  PlaneSweepVolume psv = buildPSV(sample.inputs[size_t(args.inputIndex)],
                                  sample.inputCameras[size_t(args.inputIndex)],
                                  sample.targetCamera, levels);
  fs::create_directories(args.outDir);
  for (int k = 0; k < psv.depthCount(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "plane_%03d", k);
    io::writeImage((fs::path(args.outDir) / (name + common.format)).string(),
                   psv.planes[size_t(k)]);
    Grid mask(psv.width(), psv.height());
    for (size_t i = 0; i < mask.data.size(); ++i)
      mask.data[i] = psv.validity[size_t(k)][i] ? 1.0 : 0.0;
    std::snprintf(name, sizeof(name), "valid_%03d.png", k);
    io::writeGrayPng((fs::path(args.outDir) / name).string(), mask);
  }

  json meta{{"input", args.inputIndex},
            {"depths", depths},
            {"spacing", common.spacing},
            {"levels", psv.levels.values},
            {"valid_fraction", psv.validFraction()}};
  std::ofstream mf(fs::path(args.outDir) / "meta.json", std::ios::trunc);
  mf << meta.dump(2) << '\n';
  std::cout << "wrote " << psv.depthCount() << " planes to " << args.outDir
            << "\n";
  return 0;
}

int runTrain(const TrainArgs& args, const CommonFlags& common) {
  std::vector<scene::DatasetSample> data = io::readDataset(args.dataPath);

  train::Phase phase = train::phaseFromString(args.phase);
  train::Schedule schedule = train::scheduleDefaults();
  train::TrainConfig cfg =
      phase == train::Phase::kOne16 ? schedule.phase1 : schedule.phase2;
  cfg.seed = common.seed;
  cfg.lr = args.lr;
  cfg.clipNorm = args.clipNorm;
  cfg.mrFraction = args.mrFraction;
  cfg.mrThreshold = common.mrThreshold;
  cfg.spacing = depthSpacingFromString(common.spacing);
  if (args.iterations > 0) cfg.iterations = args.iterations;
  if (args.inputPatch > 0) cfg.inputPatch = args.inputPatch;
  if (args.freezeOn && args.freezeOff)
    throw ConfigError("--freeze and --no-freeze are mutually exclusive");
  if (args.freezeOn) cfg.freezeFeatureModules = true;
  if (args.freezeOff) cfg.freezeFeatureModules = false;

  train::PairPolicy policy = train::PairPolicy::parse(common.pairs);
  const int pairsPerView = int(train::buildPairs(data.front(), policy).size());
  if (args.uniqueViews > 0) {
    cfg.uniqueViews = args.uniqueViews;
    cfg.minibatchPairs = args.uniqueViews * pairsPerView;
  }
  if (args.minibatchPairs > 0) cfg.minibatchPairs = args.minibatchPairs;

  cfg.dMin = common.dMin > 0 ? common.dMin : data.front().depthBandMin;
  cfg.dMax = common.dMax > 0 ? common.dMax : data.front().depthBandMax;
  if (!(cfg.dMin > 0 && cfg.dMin < cfg.dMax))
    throw ConfigError("no usable depth band; pass --dmin/--dmax");

  const int depthLevels = train::phaseDepthLevels(phase);
  if (common.depths > 0 && common.depths != depthLevels)
    throw ConfigError("--depths conflicts with phase " + args.phase);

  net::ModelConfig modelCfg = args.preset == "compact"
                                  ? net::ModelConfig::compact(depthLevels)
                                  : net::ModelConfig::paper(depthLevels);
  if (args.preset != "compact" && args.preset != "paper")
    throw ConfigError("--preset must be paper or compact");
  net::Model model(modelCfg, common.seed);

  if (phase == train::Phase::kTwo64) {
    if (args.initCheckpoint.empty())
      throw ConfigError("phase two64 requires --init <phase-one checkpoint>");
    model.loadFeatureModules(args.initCheckpoint);
  } else if (!args.initCheckpoint.empty()) {
    model.loadFeatureModules(args.initCheckpoint);
  }

  auto start = std::chrono::steady_clock::now();
  train::TrainResult result = train::trainPhase(
      data, cfg, policy, model, args.outCheckpoint + ".rescue");
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  model.save(args.outCheckpoint, toString(phase));
  train::writeLossCurveCsv(args.outCheckpoint + ".loss.csv", result.curve);
  train::writeTrainManifest(args.outCheckpoint + ".train.json", cfg, modelCfg,
                            args.initCheckpoint, result);

  if (result.aborted) {
    std::cerr << "training aborted: " << result.abortReason << "\n";
    return 1;
  }
  std::printf("trained %d iterations in %.1fs; final L1x255 %.3f\n",
              cfg.iterations, seconds,
              result.curve.empty() ? 0.0 : result.curve.back().l1x255);
  return 0;
}

int runSynthesize(const SynthesizeArgs& args, const CommonFlags& common) {
  net::Model model = net::Model::load(args.checkpoint);
  const int depths = model.config().depthLevels;
  if (common.depths > 0 && common.depths != depths)
    throw ConfigError("--depths " + std::to_string(common.depths) +
                      " does not match the checkpoint (" +
                      std::to_string(depths) + " levels)");

  std::vector<scene::DatasetSample> samples = io::readDataset(args.dataPath);
  train::PairPolicy policy = train::PairPolicy::parse(common.pairs);
  fs::create_directories(args.outDir);

  eval::EvalReport report;
  bool anyGt = false;
  auto start = std::chrono::steady_clock::now();

  for (size_t vi = 0; vi < samples.size(); ++vi) {
    const scene::DatasetSample& sample = samples[vi];
    pipeline::SynthesisOptions opt;
    opt.levels = levelsFor(sample, depths, common);
    opt.pairs = train::buildPairs(sample, policy);
    opt.multires = common.mr;
    opt.mr.patchSize = common.mrPatch;
    opt.mr.threshold = common.mrThreshold;
    opt.mr.spacing = depthSpacingFromString(common.spacing);
    if (common.mr) opt.mr.validate();

    pipeline::SynthesisResult res = pipeline::synthesizeView(
        sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);

    fs::path dir = samples.size() == 1
                       ? fs::path(args.outDir)
                       : fs::path(args.outDir) / zeroPad("view", int(vi));
    fs::create_directories(dir);
    io::writeImage((dir / ("final" + common.format)).string(), res.finalImage);
    for (size_t p = 0; p < res.pairs.size(); ++p) {
      io::writeImage(
          (dir / (zeroPad("pair", int(p)) + common.format)).string(),
          res.pairs[p].fused);
      io::writeGrayPng((dir / zeroPad("occweight", int(p), ".png")).string(),
                       res.pairs[p].occlusionWeight);
      io::writeGrayPng((dir / zeroPad("conf", int(p), ".png")).string(),
                       res.pairs[p].confidenceA);
      io::writeGrayPng((dir / zeroPad("argmax", int(p), ".png")).string(),
                       argmaxToGray(res.pairs[p].argmaxDepth, depths));
    }
    const Image& output =
        res.finalImageMr.has_value() ? *res.finalImageMr : res.finalImage;
    if (res.finalImageMr.has_value())
      io::writeImage((dir / ("final_mr" + common.format)).string(),
                     *res.finalImageMr);

    if (sample.targetDepth.has_value() || sample.target.width > 0) {
      eval::ViewMetrics vm;
      vm.viewId = zeroPad("view", int(vi));
      vm.l1x255 = eval::l1x255(output, sample.target);
      vm.ssim = eval::ssim(output, sample.target);
      vm.pairsUsed = int(opt.pairs.size());
      vm.mr = common.mr;
      vm.depths = depths;
      report.views.push_back(vm);
      anyGt = true;
    }
  }

  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (anyGt) report.writeCsv((fs::path(args.outDir) / "report.csv").string());

  json meta{{"checkpoint", args.checkpoint},
            {"depths", depths},
            {"pairs", common.pairs},
            {"mr", common.mr},
            {"mr_threshold", common.mrThreshold},
            {"mr_patch", common.mrPatch},
            {"spacing", common.spacing},
            {"views", samples.size()},
            {"runtime_seconds", seconds}};
  if (anyGt) {
    meta["mean_l1_x255"] = report.meanL1();
    meta["mean_ssim"] = report.meanSsim();
  }
  std::ofstream mf(fs::path(args.outDir) / "meta.json", std::ios::trunc);
  mf << meta.dump(2) << '\n';

  std::string tail =
      anyGt ? " ; mean L1x255 " + std::to_string(report.meanL1()) : "";
  std::printf("synthesized %zu view(s) in %.1fs%s\n", samples.size(), seconds,
              tail.c_str());
  return 0;
}

int runEval(const EvalArgs& args, const CommonFlags&) {
  if (!fs::is_directory(args.predDir))
    throw DataError("prediction directory not found: " + args.predDir);
  if (!fs::is_directory(args.gtDir))
    throw DataError("ground-truth directory not found: " + args.gtDir);

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(args.predDir)) {
    std::string ext = e.path().extension().string();
    if (ext == ".png" || ext == ".ppm") names.push_back(e.path().filename());
  }
  std::sort(names.begin(), names.end());
  if (names.empty())
    throw DataError("no images under prediction directory: " + args.predDir);

  eval::EvalReport report;
  for (const std::string& name : names) {
    fs::path gtPath = fs::path(args.gtDir) / name;
    if (!fs::exists(gtPath))
      throw DataError("ground truth missing for '" + name + "'");
    Image pred = io::readImage((fs::path(args.predDir) / name).string());
    Image gt = io::readImage(gtPath.string());
    eval::ViewMetrics vm;
    vm.viewId = name;
    vm.l1x255 = eval::l1x255(pred, gt);
    vm.ssim = eval::ssim(pred, gt);
    report.views.push_back(vm);
  }
  if (args.outCsv.empty())
    std::cout << report.csv();
  else
    report.writeCsv(args.outCsv);
  return 0;
}

int runDumpPdf(const DumpPdfArgs& args, const CommonFlags& common) {
  net::Model model = net::Model::load(args.checkpoint);
  const int depths = model.config().depthLevels;
  if (common.depths > 0 && common.depths != depths)
    throw ConfigError("--depths does not match the checkpoint");

  scene::DatasetSample sample = io::readSample(args.dataPath);
  train::PairPolicy policy = train::PairPolicy::parse(common.pairs);

  pipeline::SynthesisOptions opt;
  opt.levels = levelsFor(sample, depths, common);
  opt.pairs = train::buildPairs(sample, policy);

  pipeline::SynthesisResult res = pipeline::synthesizeView(
      sample.inputs, sample.inputCameras, sample.targetCamera, model, opt);

  std::vector<std::pair<int, int>> pixels;
  if (args.pixels.empty()) {
    pixels.push_back({sample.target.width / 2, sample.target.height / 2});
  } else {
    std::string text = args.pixels;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t semi = text.find(';', pos);
      std::string tok = text.substr(pos, semi == std::string::npos
                                             ? std::string::npos
                                             : semi - pos);
      int x, y;
      if (std::sscanf(tok.c_str(), "%d,%d", &x, &y) != 2)
        throw ConfigError("--pixels expects \"x,y;x,y;...\", got '" + tok +
                          "'");
      if (x < 0 || y < 0 || x >= sample.target.width ||
          y >= sample.target.height)
        throw ConfigError("--pixels entry out of the target frame");
      pixels.push_back({x, y});
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
  }

  fs::create_directories(args.outDir);
  for (size_t p = 0; p < res.pairs.size(); ++p)
    io::writeGrayPng(
        (fs::path(args.outDir) / zeroPad("argmax", int(p), ".png")).string(),
        argmaxToGray(res.pairs[p].argmaxDepth, depths));

  std::ofstream csv(fs::path(args.outDir) / "pdf_pixels.csv", std::ios::trunc);
  csv << "pair,x,y,level,depth,probability\n";
  char buf[128];
  for (size_t p = 0; p < res.pairs.size(); ++p) {
    const ad::Tensor& pdf = res.pairs[p].pdf;
    size_t plane = size_t(pdf.shape[1]) * pdf.shape[2];
    for (auto [x, y] : pixels)
      for (int k = 0; k < depths; ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%d,%.17g,%.17g\n", p, x, y,
                      k, opt.levels[k],
                      pdf.data[size_t(k) * plane +
                               size_t(y) * pdf.shape[2] + x]);
        csv << buf;
      }
  }
  std::cout << "wrote pdf dumps for " << res.pairs.size() << " pair(s) to "
            << args.outDir << "\n";
  return 0;
}

}  // namespace psw::cli
