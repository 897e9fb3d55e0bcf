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

#include "psw/geometry/depth_levels.hpp"

#include <cmath>

namespace psw {

DepthSpacing depthSpacingFromString(const std::string& s) {
  if (s == "inverse" || s == "inverse-depth") return DepthSpacing::kInverseDepth;
  if (s == "linear") return DepthSpacing::kLinear;
  throw ConfigError("unknown depth spacing '" + s + "'");
}

std::string toString(DepthSpacing s) {
  return s == DepthSpacing::kInverseDepth ? "inverse" : "linear";
}

int DepthLevels::nearestIndex(double depth) const {
  int best = 0;
  double bestDist = std::fabs(values[0] - depth);
  for (int k = 1; k < count(); ++k) {
    double d = std::fabs(values[size_t(k)] - depth);
    if (d < bestDist) {
      bestDist = d;
      best = k;
    }
  }
  return best;
}

void DepthLevels::validate() const {
  PSW_CHECK(count() >= 2, "depth levels need at least two entries");
  PSW_CHECK(values.front() > 0, "depth levels must be positive");
  for (int k = 1; k < count(); ++k)
    PSW_CHECK(values[size_t(k)] > values[size_t(k - 1)],
              "depth levels must be strictly increasing");
}

DepthLevels makeDepthLevels(double dMin, double dMax, int count,
                            DepthSpacing spacing) {
  if (!(dMin > 0) || !(dMin < dMax))
    throw ConfigError("depth range requires 0 < dMin < dMax");
  if (count < 2) throw ConfigError("need at least two depth levels");

  DepthLevels levels;
  levels.values.resize(size_t(count));
  if (spacing == DepthSpacing::kInverseDepth) {
    double invMin = 1.0 / dMin;
    double invMax = 1.0 / dMax;
    for (int k = 1; k < count - 1; ++k)
      levels.values[size_t(k)] =
          1.0 / (invMin + k * (invMax - invMin) / (count - 1));
  } else {
    for (int k = 1; k < count - 1; ++k)
      levels.values[size_t(k)] = dMin + k * (dMax - dMin) / (count - 1);
  }
  levels.values.front() = dMin;
  levels.values.back() = dMax;
  levels.validate();
  return levels;
}

}  // namespace psw
