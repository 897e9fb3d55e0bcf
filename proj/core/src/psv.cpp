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

#include "psw/geometry/psv.hpp"

#include <cmath>

namespace psw {

Mat3 planeHomography(const Camera& source, const Camera& virtualCam,
                     double depth) {
  PSW_CHECK(depth > 0, "plane depth must be positive");
  Mat3 rRel = source.rotation() * virtualCam.rotation().transposed();
  Vec3 tRel = source.translation() - rRel * virtualCam.translation();

  // R_rel + t_rel * n^T / depth with n = e_z in the virtual frame: the
  // rank-one term only touches the third column.
  Mat3 m = rRel;
  m(0, 2) += tRel.x / depth;
  m(1, 2) += tRel.y / depth;
  m(2, 2) += tRel.z / depth;

  return source.intrinsics() * m * virtualCam.intrinsicsInverse();
}

WarpResult warpImage(const Image& src, const Mat3& h, int outWidth,
                     int outHeight) {
  for (double v : h.m)
    PSW_CHECK(std::isfinite(v), "homography must be finite");

  WarpResult out;
  out.image = Image(outWidth, outHeight, 0.0);
  out.validity.assign(size_t(outWidth) * outHeight, 0);

  const int sw = src.width;
  const int sh = src.height;
  const double* srcR = src.data.data();
  const double* srcG = srcR + size_t(sw) * sh;
  const double* srcB = srcG + size_t(sw) * sh;
  double* dstR = out.image.data.data();
  double* dstG = dstR + size_t(outWidth) * outHeight;
  double* dstB = dstG + size_t(outWidth) * outHeight;

  for (int y = 0; y < outHeight; ++y) {
    double px = h.m[1] * y + h.m[2];
    double py = h.m[4] * y + h.m[5];
    double pw = h.m[7] * y + h.m[8];
    for (int x = 0; x < outWidth; ++x) {
      double hx = px + h.m[0] * x;
      double hy = py + h.m[3] * x;
      double hw = pw + h.m[6] * x;
      if (hw <= 1e-12) continue;
      double sx = hx / hw;
      double sy = hy / hw;
      if (!(sx >= 0.0 && sx <= sw - 1 && sy >= 0.0 && sy <= sh - 1)) continue;

      int x0 = int(sx);
      int y0 = int(sy);
      if (x0 == sw - 1) x0 = sw - 2;  // exact right/bottom edge
      if (y0 == sh - 1) y0 = sh - 2;
      if (sw == 1) x0 = 0;
      if (sh == 1) y0 = 0;
      double fx = sx - x0;
      double fy = sy - y0;
      int x1 = sw == 1 ? x0 : x0 + 1;
      int y1 = sh == 1 ? y0 : y0 + 1;

      double w00 = (1 - fx) * (1 - fy);
      double w10 = fx * (1 - fy);
      double w01 = (1 - fx) * fy;
      double w11 = fx * fy;
      size_t i00 = size_t(y0) * sw + x0;
      size_t i10 = size_t(y0) * sw + x1;
      size_t i01 = size_t(y1) * sw + x0;
      size_t i11 = size_t(y1) * sw + x1;

      size_t di = size_t(y) * outWidth + x;
      dstR[di] = w00 * srcR[i00] + w10 * srcR[i10] + w01 * srcR[i01] +
                 w11 * srcR[i11];
      dstG[di] = w00 * srcG[i00] + w10 * srcG[i10] + w01 * srcG[i01] +
                 w11 * srcG[i11];
      dstB[di] = w00 * srcB[i00] + w10 * srcB[i10] + w01 * srcB[i01] +
                 w11 * srcB[i11];
      out.validity[di] = 1;
    }
  }
  return out;
}

double PlaneSweepVolume::validFraction() const {
  size_t total = 0, good = 0;
  for (const auto& mask : validity) {
    total += mask.size();
    for (uint8_t v : mask) good += v;
  }
  return total == 0 ? 0.0 : double(good) / double(total);
}

void PlaneSweepVolume::validate() const {
  PSW_CHECK(int(planes.size()) == levels.count(),
            "PSV plane count must match depth levels");
  PSW_CHECK(planes.size() == validity.size(), "PSV validity count");
  for (size_t k = 0; k < planes.size(); ++k) {
    PSW_CHECK(planes[k].width == virtualCamera.width() &&
                  planes[k].height == virtualCamera.height(),
              "PSV plane resolution must match virtual camera");
    PSW_CHECK(validity[k].size() == planes[k].pixels(), "PSV mask size");
    for (size_t i = 0; i < validity[k].size(); ++i) {
      if (!validity[k][i]) {
        PSW_CHECK(planes[k].data[i] == 0.0 &&
                      planes[k].data[i + planes[k].pixels()] == 0.0 &&
                      planes[k].data[i + 2 * planes[k].pixels()] == 0.0,
                  "invalid PSV samples must be zero");
      }
    }
  }
}

PlaneSweepVolume buildPSV(const Image& src, const Camera& source,
                          const Camera& virtualCam,
                          const DepthLevels& levels) {
  if (src.width != source.width() || src.height != source.height())
    throw ShapeError("buildPSV: image does not match source camera");
  levels.validate();

  PlaneSweepVolume psv{.planes = {},
                       .validity = {},
                       .sourceCamera = source,
                       .virtualCamera = virtualCam,
                       .levels = levels};
  psv.planes.reserve(size_t(levels.count()));
  psv.validity.reserve(size_t(levels.count()));
  for (int k = 0; k < levels.count(); ++k) {
    Mat3 h = planeHomography(source, virtualCam, levels[k]);
    WarpResult w = warpImage(src, h, virtualCam.width(), virtualCam.height());
    psv.planes.push_back(std::move(w.image));
    psv.validity.push_back(std::move(w.validity));
  }
  psv.validate();
  return psv;
}

}  // namespace psw
