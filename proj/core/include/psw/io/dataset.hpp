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

#ifndef PSW_IO_DATASET_HPP
#define PSW_IO_DATASET_HPP

#include <string>
#include <vector>

#include "psw/scene/scene.hpp"

namespace psw::io {

/// Sample directory layout:
///   cameras.txt          input_00..input_NN and target records
///   input_00.png ...     input views (PNG or PPM)
///   target.png           held-out view
///   target_depth.pswd    analytic depth (optional; real data has none)
///   sample.json          roles and rig metadata
void writeSample(const std::string& dir, const scene::DatasetSample& sample,
                 const std::string& imageExt = ".png");
scene::DatasetSample readSample(const std::string& dir);

/// A dataset directory holds sample_000/, sample_001/, ...
std::vector<std::string> listSampleDirs(const std::string& datasetDir);

/// Reads either a dataset directory or a single sample directory.
std::vector<scene::DatasetSample> readDataset(const std::string& path);

}  // namespace psw::io

#endif  // PSW_IO_DATASET_HPP
