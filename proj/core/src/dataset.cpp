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

#include "psw/io/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "psw/io/camera_io.hpp"
#include "psw/io/depth_io.hpp"
#include "psw/io/image_io.hpp"

namespace psw::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string inputName(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "input_%02d", i);
  return buf;
}

std::string findImage(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".png", ".ppm"}) {
    fs::path p = dir / (stem + ext);
    if (fs::exists(p)) return p.string();
  }
  throw DataError("sample '" + dir.string() + "': missing image '" + stem +
                  "'");
}

}  // namespace

void writeSample(const std::string& dir, const scene::DatasetSample& sample,
                 const std::string& imageExt) {
  sample.validate();
  fs::create_directories(dir);
  fs::path base(dir);

  std::vector<NamedCamera> cams;
  json inputs = json::array();
  for (size_t i = 0; i < sample.inputs.size(); ++i) {
    std::string stem = inputName(int(i));
    writeImage((base / (stem + imageExt)).string(), sample.inputs[i]);
    cams.push_back({stem, sample.inputCameras[i]});
    inputs.push_back(stem);
  }
  writeImage((base / ("target" + imageExt)).string(), sample.target);
  cams.push_back({"target", sample.targetCamera});
  writeCameras((base / "cameras.txt").string(), cams);
  if (sample.targetDepth)
    writeDepth((base / "target_depth.pswd").string(), *sample.targetDepth);

  json meta{{"inputs", inputs},
            {"target", "target"},
            {"rig", sample.rigKind},
            {"grid_rows", sample.gridRows},
            {"grid_cols", sample.gridCols},
            {"depth_band", {sample.depthBandMin, sample.depthBandMax}}};
  std::ofstream f(base / "sample.json", std::ios::trunc);
  if (!f) throw DataError("cannot write sample manifest in " + dir);
  f << meta.dump(2) << '\n';
}

scene::DatasetSample readSample(const std::string& dir) {
  fs::path base(dir);
  std::ifstream mf(base / "sample.json");
  if (!mf) throw DataError("sample '" + dir + "': missing sample.json");
  json meta;
  try {
    meta = json::parse(mf);
  } catch (const json::exception& e) {
    throw DataError("sample '" + dir + "': bad manifest: " + e.what());
  }

  auto cams = readCameras((base / "cameras.txt").string());
  auto findCam = [&](const std::string& id) -> const Camera& {
    for (const NamedCamera& nc : cams)
      if (nc.id == id) return nc.camera;
    throw DataError("sample '" + dir + "': cameras.txt lacks record '" + id +
                    "'");
  };

  scene::DatasetSample sample;
  try {
    for (const auto& name : meta.at("inputs")) {
      std::string stem = name.get<std::string>();
      sample.inputs.push_back(readImage(findImage(base, stem)));
      sample.inputCameras.push_back(findCam(stem));
    }
    std::string targetStem = meta.at("target").get<std::string>();
    sample.target = readImage(findImage(base, targetStem));
    sample.targetCamera = findCam(targetStem);
    sample.rigKind = meta.value("rig", "line");
    sample.gridRows = meta.value("grid_rows", 0);
    sample.gridCols = meta.value("grid_cols", 0);
    if (meta.contains("depth_band")) {
      sample.depthBandMin = meta["depth_band"].at(0).get<double>();
      sample.depthBandMax = meta["depth_band"].at(1).get<double>();
    }
  } catch (const json::exception& e) {
    throw DataError("sample '" + dir + "': bad manifest: " + e.what());
  }

  // Absent depth is a valid state (real data has no analytic depth).
  fs::path depthPath = base / "target_depth.pswd";
  if (fs::exists(depthPath)) sample.targetDepth = readDepth(depthPath.string());

  sample.validate();
  return sample;
}

std::vector<std::string> listSampleDirs(const std::string& datasetDir) {
  fs::path base(datasetDir);
  if (!fs::is_directory(base))
    throw DataError("dataset directory not found: " + datasetDir);
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.is_directory() &&
        entry.path().filename().string().rfind("sample_", 0) == 0)
      dirs.push_back(entry.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::vector<scene::DatasetSample> readDataset(const std::string& path) {
  fs::path base(path);
  if (fs::exists(base / "sample.json")) return {readSample(path)};
  std::vector<std::string> dirs = listSampleDirs(path);
  if (dirs.empty())
    throw DataError("no samples under dataset directory: " + path);
  std::vector<scene::DatasetSample> samples;
  samples.reserve(dirs.size());
  for (const std::string& d : dirs) samples.push_back(readSample(d));
  return samples;
}

}  // namespace psw::io
