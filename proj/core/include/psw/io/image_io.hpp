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

#ifndef PSW_IO_IMAGE_IO_HPP
#define PSW_IO_IMAGE_IO_HPP

#include <string>

#include "psw/image.hpp"

namespace psw::io {

/// Reads PPM (P6, maxval 255) or PNG, detected by content. Samples map
/// to byte/255.
Image readImage(const std::string& path);

/// Binary PPM, P6 maxval 255.
void writePpm(const std::string& path, const Image& img);

/// 8-bit RGB PNG.
void writePng(const std::string& path, const Image& img);

/// Grayscale 8-bit PNG; values outside [lo, hi] are clamped.
void writeGrayPng(const std::string& path, const Grid& grid, double lo = 0.0,
                  double hi = 1.0);

/// Dispatches on the file extension (.ppm or .png).
void writeImage(const std::string& path, const Image& img);

}  // namespace psw::io

#endif  // PSW_IO_IMAGE_IO_HPP
