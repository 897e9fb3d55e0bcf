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

#include "psw/io/depth_io.hpp"

#include <cstring>
#include <fstream>

namespace psw::io {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'W', 'D'};
constexpr uint32_t kVersion = 1;

void putU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

uint32_t getU32(const std::string& bytes, size_t off) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= uint32_t(uint8_t(bytes[off + i])) << (8 * i);
  return v;
}

}  // namespace

void writeDepth(const std::string& path, const Grid& depth) {
  std::string out;
  out.append(kMagic, 4);
  putU32(out, kVersion);
  putU32(out, uint32_t(depth.width));
  putU32(out, uint32_t(depth.height));
  for (double d : depth.data) {
    float f = float(d);
    uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    putU32(out, bits);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open depth raster for writing: " + path);
  f.write(out.data(), std::streamsize(out.size()));
  if (!f) throw DataError("failed writing depth raster: " + path);
}

Grid readDepth(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open depth raster: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 16)
    throw DataError("depth raster '" + path + "': truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw DataError("depth raster '" + path + "': bad magic at offset 0");
  uint32_t version = getU32(bytes, 4);
  if (version != kVersion)
    throw DataError("depth raster '" + path + "': unsupported version " +
                    std::to_string(version) + " at offset 4");
  int w = int(getU32(bytes, 8));
  int h = int(getU32(bytes, 12));
  if (w <= 0 || h <= 0)
    throw DataError("depth raster '" + path + "': bad dimensions at offset 8");
  size_t expected = 16 + size_t(w) * h * 4;
  if (bytes.size() != expected)
    throw DataError("depth raster '" + path + "': expected " +
                    std::to_string(expected) + " bytes, found " +
                    std::to_string(bytes.size()));

  Grid depth(w, h);
  for (size_t i = 0; i < depth.data.size(); ++i) {
    uint32_t bits = getU32(bytes, 16 + i * 4);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    depth.data[i] = double(f);
  }
  return depth;
}

}  // namespace psw::io
