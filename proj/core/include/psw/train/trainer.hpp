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

#ifndef PSW_TRAIN_TRAINER_HPP
#define PSW_TRAIN_TRAINER_HPP

#include <string>
#include <vector>

#include "psw/mr/multires.hpp"
#include "psw/net/model.hpp"
#include "psw/train/pairs.hpp"

namespace psw::train {

enum class Phase { kOne16, kTwo64 };

Phase phaseFromString(const std::string& s);
std::string toString(Phase p);
int phaseDepthLevels(Phase p);  // 16 / 64

struct TrainConfig {
  Phase phase = Phase::kOne16;
  int iterations = 200;
  int minibatchPairs = 48;  // uniqueViews * pairs-per-view
  int uniqueViews = 16;
  double mrFraction = 0.5;  // share of views re-presented with resampled
                            // depth levels from the previous iteration
  double lr = 1e-5;
  double clipNorm = 1.0;
  bool freezeFeatureModules = false;  // phase-two default
  uint64_t seed = 1;
  int inputPatch = 112;          // network input crop
  double minValidFraction = 0.3; // reject crops with less PSV coverage
  double dMin = 1.0, dMax = 100.0;
  DepthSpacing spacing = DepthSpacing::kInverseDepth;
  double mrThreshold = 1.0 / 100.0;
  std::string preset = "paper";  // model preset for fresh models

  void validate(int pairsPerView) const;
};

struct IterationStats {
  int iteration;
  double lossRaw;    // summed absolute error over the minibatch
  double l1x255;     // mean per-pixel-per-channel L1 x255 over views
  double gradNorm;   // pre-clip global norm
  int mrViews;       // views presented with resampled levels
};

struct TrainResult {
  std::vector<IterationStats> curve;
  bool aborted = false;
  std::string abortReason;
};

/// One training phase over a fixed sample set. Each iteration samples
/// `uniqueViews` crop windows, forwards every pair of each view, fuses
/// the estimates, sums the per-view L1 losses, and takes one clipped Adam
/// step. A `mrFraction` share of each minibatch re-presents the previous
/// iteration's fresh views with depth levels resampled from their pdfs
/// (same sample, same viewport). Deterministic for a fixed seed in this
/// single-worker implementation: fixed-seed runs produce bit-identical
/// weights.
///
/// A non-finite loss or gradient aborts the run; the last good weights
/// are saved to `rescuePath` (when non-empty) and the result reports the
/// reason.
TrainResult trainPhase(const std::vector<scene::DatasetSample>& data,
                       const TrainConfig& cfg, const PairPolicy& policy,
                       net::Model& model, const std::string& rescuePath = "");

/// Desk-scale two-phase schedule. The published schedule trains phase
/// one for 1,000,000 iterations and phase two for 250,000 with the
/// feature modules frozen; those counts are recorded as metadata here
/// and deliberately not used as defaults.
struct Schedule {
  TrainConfig phase1;
  TrainConfig phase2;
  long fullScalePhase1Iterations;
  long fullScalePhase2Iterations;
};
Schedule scheduleDefaults();

void writeLossCurveCsv(const std::string& path,
                       const std::vector<IterationStats>& curve);

/// Text manifest capturing config, seed and checkpoint lineage.
void writeTrainManifest(const std::string& path, const TrainConfig& cfg,
                        const net::ModelConfig& modelCfg,
                        const std::string& parentCheckpoint,
                        const TrainResult& result);

}  // namespace psw::train

#endif  // PSW_TRAIN_TRAINER_HPP
