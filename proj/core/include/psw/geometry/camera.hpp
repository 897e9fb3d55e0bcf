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

#ifndef PSW_GEOMETRY_CAMERA_HPP
#define PSW_GEOMETRY_CAMERA_HPP

#include "psw/common.hpp"

namespace psw {

/// Calibrated pinhole camera.
///
/// Convention: world-to-camera transform X_cam = R * X_world + t, camera
/// looks down +z, x right, y down. Pixel (i, j) has its center at image
/// coordinate (i, j); projection is u = fx*X/Z + cx, v = fy*Y/Z + cy.
class Camera {
 public:
  /// Validates intrinsics and pose. Rotation must be orthonormal within
  /// 1e-9 with determinant +1; the principal point must fall inside the
  /// image. Throws ConfigError otherwise.
  static Camera create(double fx, double fy, double cx, double cy,
                       const Mat3& rotation, const Vec3& translation,
                       int width, int height);

  /// Convenience: axis-aligned camera (identity rotation) at world
  /// position `center`, principal point at the image midpoint.
  static Camera lookingForward(double fx, double fy, int width, int height,
                               const Vec3& center);

  /// Viewport camera for the window [x0, x0+w) x [y0, y0+h) of this view.
  /// Shares pose and focal lengths; the principal point shifts by the
  /// window origin and may legitimately leave the viewport, so only the
  /// orthonormality checks are re-applied.
  Camera cropped(int x0, int y0, int w, int h) const;

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Mat3 intrinsics() const;         // K
  Mat3 intrinsicsInverse() const;  // K^-1

  /// Camera center in world coordinates: -R^T t.
  Vec3 center() const;

  /// World point -> (u, v, depth); depth is the camera-frame z.
  struct Projection {
    double u, v, depth;
  };
  Projection project(const Vec3& world) const;

  /// Unit-z camera ray through pixel (u, v), returned in world coordinates.
  Vec3 pixelRayWorld(double u, double v) const;

  bool samePose(const Camera& o, double tol = 1e-12) const;

  /// Placeholder until assigned from create()/cropped(); zero-sized and
  /// unusable for projection.
  Camera() = default;

 private:
  double fx_ = 0, fy_ = 0, cx_ = 0, cy_ = 0;
  Mat3 rotation_;
  Vec3 translation_;
  int width_ = 0, height_ = 0;
};

}  // namespace psw

#endif  // PSW_GEOMETRY_CAMERA_HPP
