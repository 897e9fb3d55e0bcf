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

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "psw/common.hpp"

int main(int argc, char** argv) {
  using namespace psw::cli;

  CLI::App app{"plane-sweep novel view synthesis"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags common;
  app.add_option("--seed", common.seed, "deterministic seed");
  app.add_option("--depths", common.depths,
                 "depth level count (16|64|N; must match the checkpoint)");
  app.add_flag("--mr", common.mr, "enable multi-resolution depth resampling");
  app.add_option("--mr-threshold", common.mrThreshold,
                 "pooled-pdf threshold, within [1/200, 1/30]");
  app.add_option("--mr-patch", common.mrPatch, "mr pooling patch size");
  app.add_option("--pairs", common.pairs,
                 "pair policy: adjacent|grid|nearest:K");
  app.add_option("--spacing", common.spacing,
                 "depth level spacing: inverse|linear");
  app.add_option("--dmin", common.dMin, "sweep near depth");
  app.add_option("--dmax", common.dMax, "sweep far depth");
  app.add_option("--format", common.format, "image format: .png|.ppm")
      ->check(CLI::IsMember({".png", ".ppm"}));

  GenSceneArgs gen;
  CLI::App* genCmd =
      app.add_subcommand("gen-scene", "render a synthetic dataset");
  genCmd->add_option("--spec", gen.specPath, "scene spec file")->required();
  genCmd->add_option("--out", gen.outDir, "output dataset directory")
      ->required();
  genCmd->add_option("--samples", gen.samples, "rig instances to render");

  BuildPsvArgs psv;
  CLI::App* psvCmd =
      app.add_subcommand("build-psv", "dump a plane sweep volume");
  psvCmd->add_option("--data", psv.dataPath, "sample directory")->required();
  psvCmd->add_option("--input", psv.inputIndex, "input view index");
  psvCmd->add_option("--out", psv.outDir, "output directory")->required();

  TrainArgs train;
  CLI::App* trainCmd = app.add_subcommand("train", "train a model phase");
  trainCmd->add_option("--data", train.dataPath, "dataset directory")
      ->required();
  trainCmd->add_option("--out", train.outCheckpoint, "output checkpoint")
      ->required();
  trainCmd->add_option("--phase", train.phase, "one16|two64");
  trainCmd->add_option("--preset", train.preset, "paper|compact");
  trainCmd->add_option("--init", train.initCheckpoint,
                       "parent checkpoint (required for two64)");
  trainCmd->add_option("--iterations", train.iterations, "iteration count");
  trainCmd->add_option("--views", train.uniqueViews,
                       "unique novel views per minibatch");
  trainCmd->add_option("--minibatch-pairs", train.minibatchPairs,
                       "total pairs per minibatch");
  trainCmd->add_option("--lr", train.lr, "learning rate");
  trainCmd->add_option("--clip", train.clipNorm, "global gradient-norm clip");
  trainCmd->add_option("--mr-fraction", train.mrFraction,
                       "share of views re-presented with resampled levels");
  trainCmd->add_option("--input-patch", train.inputPatch,
                       "network input crop size");
  trainCmd->add_flag("--freeze", train.freezeOn,
                     "freeze feature extraction + correlation");
  trainCmd->add_flag("--no-freeze", train.freezeOff,
                     "train all modules (overrides the phase-two default)");

  SynthesizeArgs synth;
  CLI::App* synthCmd =
      app.add_subcommand("synthesize", "render novel views with a model");
  synthCmd->add_option("--data", synth.dataPath, "sample or dataset dir")
      ->required();
  synthCmd->add_option("--ckpt", synth.checkpoint, "model checkpoint")
      ->required();
  synthCmd->add_option("--out", synth.outDir, "output directory")->required();

  EvalArgs evalArgs;
  CLI::App* evalCmd =
      app.add_subcommand("eval", "L1/SSIM report for prediction dirs");
  evalCmd->add_option("--pred", evalArgs.predDir, "predictions")->required();
  evalCmd->add_option("--gt", evalArgs.gtDir, "ground truth")->required();
  evalCmd->add_option("--out", evalArgs.outCsv, "CSV path (default stdout)");

  DumpPdfArgs dump;
  CLI::App* dumpCmd =
      app.add_subcommand("dump-pdf", "export depth pdfs and argmax maps");
  dumpCmd->add_option("--data", dump.dataPath, "sample directory")->required();
  dumpCmd->add_option("--ckpt", dump.checkpoint, "model checkpoint")
      ->required();
  dumpCmd->add_option("--out", dump.outDir, "output directory")->required();
  dumpCmd->add_option("--pixels", dump.pixels, "pdf dump pixels \"x,y;x,y\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return 2;
  }

  try {
    if (*genCmd)
      return runGenScene(gen, common, app.count("--seed") > 0);
    if (*psvCmd) return runBuildPsv(psv, common);
    if (*trainCmd) return runTrain(train, common);
    if (*synthCmd) return runSynthesize(synth, common);
    if (*evalCmd) return runEval(evalArgs, common);
    if (*dumpCmd) return runDumpPdf(dump, common);
  } catch (const psw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const psw::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
