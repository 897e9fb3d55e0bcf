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

#include "psw/image.hpp"

#include <cmath>

namespace psw {

Image::Image(int w, int h, double fill)
    : width(w), height(h), data(size_t(3) * w * h, fill) {
  PSW_CHECK(w > 0 && h > 0, "image dimensions must be positive");
}

Image Image::crop(int x0, int y0, int w, int h) const {
  PSW_CHECK(x0 >= 0 && y0 >= 0 && x0 + w <= width && y0 + h <= height,
            "crop outside image bounds");
  Image out(w, h);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = at(c, y0 + y, x0 + x);
  return out;
}

void Image::validate() const {
  PSW_CHECK(width > 0 && height > 0, "image dimensions must be positive");
  PSW_CHECK(data.size() == size_t(3) * width * height, "image buffer size");
  for (double v : data)
    PSW_CHECK(std::isfinite(v), "image contains non-finite sample");
}

Grid Grid::crop(int x0, int y0, int w, int h) const {
  PSW_CHECK(x0 >= 0 && y0 >= 0 && x0 + w <= width && y0 + h <= height,
            "crop outside grid bounds");
  Grid out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(y, x) = at(y0 + y, x0 + x);
  return out;
}

double maxAbsDiff(const Image& a, const Image& b) {
  if (!a.sameSize(b)) throw ShapeError("maxAbsDiff: size mismatch");
  double m = 0;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

double meanAbsDiff(const Image& a, const Image& b) {
  if (!a.sameSize(b)) throw ShapeError("meanAbsDiff: size mismatch");
  double s = 0;
  for (size_t i = 0; i < a.data.size(); ++i)
    s += std::fabs(a.data[i] - b.data[i]);
  return a.data.empty() ? 0.0 : s / double(a.data.size());
}

}  // namespace psw
