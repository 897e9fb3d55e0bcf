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

#ifndef PSW_IMAGE_HPP
#define PSW_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "psw/common.hpp"

namespace psw {

/// Three-channel raster, values in [0,1], planar layout (c, y, x).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // size 3*height*width

  Image() = default;
  Image(int w, int h, double fill = 0.0);

  double& at(int c, int y, int x) {
    return data[(size_t(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(size_t(c) * height + y) * width + x];
  }

  size_t pixels() const { return size_t(width) * height; }
  bool sameSize(const Image& o) const {
    return width == o.width && height == o.height;
  }

  /// Crop to [x0, x0+w) x [y0, y0+h); must be inside the image.
  Image crop(int x0, int y0, int w, int h) const;

  /// All samples finite and dimensions positive.
  void validate() const;
};

/// Single-channel raster (depth maps, masks, weight maps).
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // size height*width

  Grid() = default;
  Grid(int w, int h, double fill = 0.0)
      : width(w), height(h), data(size_t(w) * h, fill) {}

  double& at(int y, int x) { return data[size_t(y) * width + x]; }
  double at(int y, int x) const { return data[size_t(y) * width + x]; }

  Grid crop(int x0, int y0, int w, int h) const;
};

/// Max absolute per-channel difference; images must match in size.
double maxAbsDiff(const Image& a, const Image& b);

/// Mean absolute difference over all samples.
double meanAbsDiff(const Image& a, const Image& b);

}  // namespace psw

#endif  // PSW_IMAGE_HPP
