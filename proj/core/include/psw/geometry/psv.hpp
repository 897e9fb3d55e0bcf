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

#ifndef PSW_GEOMETRY_PSV_HPP
#define PSW_GEOMETRY_PSV_HPP

#include <vector>

#include "psw/geometry/camera.hpp"
#include "psw/geometry/depth_levels.hpp"
#include "psw/image.hpp"

namespace psw {

/// Homography taking homogeneous virtual-camera pixel coordinates to
/// source-camera pixel coordinates for the fronto-parallel plane at
/// `depth` in the virtual camera frame:
///
///   H = K_src (R_rel + t_rel n^T / depth) K_virt^-1,  n = (0,0,1)^T
///
/// with R_rel = R_src R_virt^T and t_rel = t_src - R_rel t_virt (the
/// virtual-to-source rigid transform under X_cam = R X_world + t). The
/// sign of the rank-one term follows from that convention; tests pin it
/// against a brute-force projection oracle.
Mat3 planeHomography(const Camera& source, const Camera& virtualCam,
                     double depth);

struct WarpResult {
  Image image;
  std::vector<uint8_t> validity;  // row-major height*width, 1 = sampled inside
};

/// Backward-warps `src`: output pixel p samples src at H*p with bilinear
/// interpolation. Samples outside [0,w-1]x[0,h-1] or with homogeneous
/// w-coordinate <= 1e-12 are invalid and set to 0 in all channels.
WarpResult warpImage(const Image& src, const Mat3& h, int outWidth,
                     int outHeight);

/// One source image swept over the virtual camera's depth levels.
struct PlaneSweepVolume {
  std::vector<Image> planes;                   // one per depth level
  std::vector<std::vector<uint8_t>> validity;  // parallel to planes
  Camera sourceCamera;
  Camera virtualCamera;
  DepthLevels levels;

  int depthCount() const { return int(planes.size()); }
  int width() const { return virtualCamera.width(); }
  int height() const { return virtualCamera.height(); }

  /// Fraction of valid samples across all planes.
  double validFraction() const;

  void validate() const;
};

/// Warps `src` through every depth level into the virtual camera.
PlaneSweepVolume buildPSV(const Image& src, const Camera& source,
                          const Camera& virtualCam, const DepthLevels& levels);

}  // namespace psw

#endif  // PSW_GEOMETRY_PSV_HPP
