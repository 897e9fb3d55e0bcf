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

#include "psw/io/camera_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace psw::io {

std::vector<NamedCamera> readCameras(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open cameras file: " + path);

  std::vector<NamedCamera> cameras;
  std::string line;
  int lineNo = 0;
  while (std::getline(f, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string keyword;
    if (!(is >> keyword)) continue;  // blank line
    if (keyword != "cam")
      throw DataError(path + ":" + std::to_string(lineNo) +
                      ": expected 'cam' record, got '" + keyword + "'");
    std::string id;
    int w, h;
    double fx, fy, cx, cy;
    Mat3 r;
    Vec3 t;
    if (!(is >> id >> w >> h >> fx >> fy >> cx >> cy))
      throw DataError(path + ":" + std::to_string(lineNo) +
                      ": malformed camera intrinsics");
    for (int i = 0; i < 9; ++i)
      if (!(is >> r.m[size_t(i)]))
        throw DataError(path + ":" + std::to_string(lineNo) +
                        ": malformed rotation");
    if (!(is >> t.x >> t.y >> t.z))
      throw DataError(path + ":" + std::to_string(lineNo) +
                      ": malformed translation");
    std::string extra;
    if (is >> extra)
      throw DataError(path + ":" + std::to_string(lineNo) +
                      ": trailing tokens");
    try {
      cameras.push_back({id, Camera::create(fx, fy, cx, cy, r, t, w, h)});
    } catch (const ConfigError& e) {
      throw DataError(path + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return cameras;
}

void writeCameras(const std::string& path,
                  const std::vector<NamedCamera>& cameras) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("cannot open cameras file for writing: " + path);
  f << "# cam <id> <w> <h> <fx> <fy> <cx> <cy> <r00..r22 row-major> <tx ty "
       "tz>\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const NamedCamera& nc : cameras) {
    const Camera& c = nc.camera;
    f << "cam " << nc.id << ' ' << c.width() << ' ' << c.height() << ' '
      << num(c.fx()) << ' ' << num(c.fy()) << ' ' << num(c.cx()) << ' '
      << num(c.cy());
    for (double v : c.rotation().m) f << ' ' << num(v);
    f << ' ' << num(c.translation().x) << ' ' << num(c.translation().y) << ' '
      << num(c.translation().z) << '\n';
  }
  if (!f) throw DataError("failed writing cameras file: " + path);
}

}  // namespace psw::io
