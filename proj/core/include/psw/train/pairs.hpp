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

#ifndef PSW_TRAIN_PAIRS_HPP
#define PSW_TRAIN_PAIRS_HPP

#include <string>
#include <utility>
#include <vector>

#include "psw/scene/scene.hpp"

namespace psw::train {

/// How to group input views into image pairs.
struct PairPolicy {
  enum class Kind { kAdjacent, kGridNeighbors, kNearestK };
  Kind kind = Kind::kAdjacent;
  int k = 4;  // nearest-K only

  /// Parses "adjacent", "grid" or "nearest:K".
  static PairPolicy parse(const std::string& text);
  std::string str() const;
};

/// Deterministic pair construction.
///   adjacent:      consecutive inputs along the rig order
///   gridNeighbors: horizontal + vertical edges of the declared grid
///   nearestK:      the k index pairs whose camera-center midpoint is
///                  nearest the target center; ties break on (i, j)
/// Throws on fewer than two inputs.
std::vector<std::pair<int, int>> buildPairs(const scene::DatasetSample& sample,
                                            const PairPolicy& policy);

}  // namespace psw::train

#endif  // PSW_TRAIN_PAIRS_HPP
