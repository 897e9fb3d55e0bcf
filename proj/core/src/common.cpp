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

#include "psw/common.hpp"

namespace psw {

Mat3 Mat3::inverse() const {
  const auto& a = m;
  Mat3 adj;
  adj.m = {a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8],
           a[1] * a[5] - a[2] * a[4], a[5] * a[6] - a[3] * a[8],
           a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
           a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7],
           a[0] * a[4] - a[1] * a[3]};
  double d = det();
  if (std::fabs(d) < 1e-300) throw ConfigError("Mat3: singular matrix");
  for (double& v : adj.m) v /= d;
  return adj;
}

}  // namespace psw
