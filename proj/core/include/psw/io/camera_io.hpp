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

#ifndef PSW_IO_CAMERA_IO_HPP
#define PSW_IO_CAMERA_IO_HPP

#include <string>
#include <vector>

#include "psw/geometry/camera.hpp"

namespace psw::io {

struct NamedCamera {
  std::string id;
  Camera camera;
};

/// Camera text format: one record per line,
///   cam <id> <w> <h> <fx> <fy> <cx> <cy> <r00..r22 row-major> <tx ty tz>
/// whitespace separated, '#' starts a comment. Doubles are written with
/// 17 significant digits so write/read round-trips exactly.
std::vector<NamedCamera> readCameras(const std::string& path);
void writeCameras(const std::string& path,
                  const std::vector<NamedCamera>& cameras);

}  // namespace psw::io

#endif  // PSW_IO_CAMERA_IO_HPP
