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

#include "psw/train/pairs.hpp"

#include <algorithm>

namespace psw::train {

PairPolicy PairPolicy::parse(const std::string& text) {
  PairPolicy p;
  if (text == "adjacent") {
    p.kind = Kind::kAdjacent;
  } else if (text == "grid") {
    p.kind = Kind::kGridNeighbors;
  } else if (text.rfind("nearest:", 0) == 0) {
    p.kind = Kind::kNearestK;
    try {
      p.k = std::stoi(text.substr(8));
    } catch (...) {
      throw ConfigError("bad pair policy '" + text + "'");
    }
    if (p.k < 1) throw ConfigError("nearest:K needs K >= 1");
  } else {
    throw ConfigError("pair policy must be adjacent|grid|nearest:K, got '" +
                      text + "'");
  }
  return p;
}

std::string PairPolicy::str() const {
  switch (kind) {
    case Kind::kAdjacent:
      return "adjacent";
    case Kind::kGridNeighbors:
      return "grid";
    default:
      return "nearest:" + std::to_string(k);
  }
}

std::vector<std::pair<int, int>> buildPairs(const scene::DatasetSample& sample,
                                            const PairPolicy& policy) {
  const int n = int(sample.inputs.size());
  if (n < 2) throw ConfigError("pair construction needs at least two inputs");

  std::vector<std::pair<int, int>> pairs;
  switch (policy.kind) {
    case PairPolicy::Kind::kAdjacent:
      for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
      break;

    case PairPolicy::Kind::kGridNeighbors: {
      if (sample.gridRows * sample.gridCols != n)
        throw ConfigError(
            "grid pairing needs grid metadata matching the input count");
      int rows = sample.gridRows, cols = sample.gridCols;
      auto at = [cols](int r, int c) { return r * cols + c; };
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c)
          pairs.emplace_back(at(r, c), at(r, c + 1));
      for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < cols; ++c)
          pairs.emplace_back(at(r, c), at(r + 1, c));
      break;
    }

    case PairPolicy::Kind::kNearestK: {
      Vec3 target = sample.targetCamera.center();
      struct Candidate {
        double dist;
        int a, b;
      };
      std::vector<Candidate> candidates;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Vec3 mid = (sample.inputCameras[size_t(i)].center() +
                      sample.inputCameras[size_t(j)].center()) *
                     0.5;
          candidates.push_back({(mid - target).norm(), i, j});
        }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const Candidate& x, const Candidate& y) {
                         if (x.dist != y.dist) return x.dist < y.dist;
                         if (x.a != y.a) return x.a < y.a;
                         return x.b < y.b;
                       });
      int k = std::min<int>(policy.k, int(candidates.size()));
      for (int i = 0; i < k; ++i)
        pairs.emplace_back(candidates[size_t(i)].a, candidates[size_t(i)].b);
      break;
    }
  }
  PSW_CHECK(!pairs.empty(), "pair policy produced no pairs");
  return pairs;
}

}  // namespace psw::train
