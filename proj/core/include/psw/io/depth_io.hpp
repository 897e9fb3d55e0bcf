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

#ifndef PSW_IO_DEPTH_IO_HPP
#define PSW_IO_DEPTH_IO_HPP

#include <string>

#include "psw/image.hpp"

namespace psw::io {

/// Depth raster: 16-byte header (magic "PSWD", version u32, width u32,
/// height u32, all little-endian) followed by width*height float32
/// little-endian values, row-major. Depth 0 marks background.
void writeDepth(const std::string& path, const Grid& depth);
Grid readDepth(const std::string& path);

}  // namespace psw::io

#endif  // PSW_IO_DEPTH_IO_HPP
