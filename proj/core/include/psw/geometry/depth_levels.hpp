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

#ifndef PSW_GEOMETRY_DEPTH_LEVELS_HPP
#define PSW_GEOMETRY_DEPTH_LEVELS_HPP

#include <vector>

#include "psw/common.hpp"

namespace psw {

enum class DepthSpacing { kInverseDepth, kLinear };

DepthSpacing depthSpacingFromString(const std::string& s);
std::string toString(DepthSpacing s);

/// Strictly increasing positive sweep depths.
struct DepthLevels {
  std::vector<double> values;

  int count() const { return int(values.size()); }
  double dMin() const { return values.front(); }
  double dMax() const { return values.back(); }
  double operator[](int k) const { return values[size_t(k)]; }

  /// Index of the level nearest to `depth`.
  int nearestIndex(double depth) const;

  void validate() const;
};

/// Discretizes [dMin, dMax] into D levels. Inverse-depth spacing is
/// uniform in 1/d (disparity-uniform); linear is uniform in d. Endpoints
/// are exact in both modes.
DepthLevels makeDepthLevels(double dMin, double dMax, int count,
                            DepthSpacing spacing);

}  // namespace psw

#endif  // PSW_GEOMETRY_DEPTH_LEVELS_HPP
