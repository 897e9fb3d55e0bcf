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

#ifndef PSW_TOOLS_COMMANDS_HPP
#define PSW_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace psw::cli {

/// Flags shared across subcommands.
struct CommonFlags {
  uint64_t seed = 1;
  int depths = 0;  // 0 = take the checkpoint's / phase's value
  bool mr = false;
  double mrThreshold = 1.0 / 100.0;
  int mrPatch = 32;
  std::string pairs = "adjacent";
  std::string spacing = "inverse";
  double dMin = 0, dMax = 0;  // 0 = take the sample's declared band
  std::string format = ".png";
};

struct GenSceneArgs {
  std::string specPath;
  std::string outDir;
  int samples = 1;
};
int runGenScene(const GenSceneArgs& args, const CommonFlags& common,
                bool seedGiven);

struct BuildPsvArgs {
  std::string dataPath;
  std::string outDir;
  int inputIndex = 0;
};
int runBuildPsv(const BuildPsvArgs& args, const CommonFlags& common);

struct TrainArgs {
  std::string dataPath;
  std::string outCheckpoint;
  std::string phase = "one16";
  std::string preset = "paper";
  std::string initCheckpoint;  // phase-two parent
  int iterations = -1;         // -1 = schedule default for the phase
  int uniqueViews = -1;
  int minibatchPairs = -1;
  double lr = 1e-5;
  double clipNorm = 1.0;
  double mrFraction = 0.5;
  int inputPatch = -1;
  bool freezeOn = false;   // --freeze
  bool freezeOff = false;  // --no-freeze; neither = phase default
};
int runTrain(const TrainArgs& args, const CommonFlags& common);

struct SynthesizeArgs {
  std::string dataPath;
  std::string checkpoint;
  std::string outDir;
};
int runSynthesize(const SynthesizeArgs& args, const CommonFlags& common);

struct EvalArgs {
  std::string predDir;
  std::string gtDir;
  std::string outCsv;  // empty = stdout
};
int runEval(const EvalArgs& args, const CommonFlags& common);

struct DumpPdfArgs {
  std::string dataPath;
  std::string checkpoint;
  std::string outDir;
  std::string pixels;  // "x,y;x,y"; empty = frame center
};
int runDumpPdf(const DumpPdfArgs& args, const CommonFlags& common);

}  // namespace psw::cli

#endif  // PSW_TOOLS_COMMANDS_HPP
