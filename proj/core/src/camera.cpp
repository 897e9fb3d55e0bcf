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

#include "psw/geometry/camera.hpp"

#include <cmath>

namespace psw {
namespace {

void checkRotation(const Mat3& r) {
  Mat3 rtr = r.transposed() * r;
  Mat3 eye = Mat3::identity();
  for (int i = 0; i < 9; ++i) {
    if (std::fabs(rtr.m[i] - eye.m[i]) > 1e-9)
      throw ConfigError("camera rotation is not orthonormal");
  }
  if (std::fabs(r.det() - 1.0) > 1e-9)
    throw ConfigError("camera rotation must have determinant +1");
}

}  // namespace

Camera Camera::create(double fx, double fy, double cx, double cy,
                      const Mat3& rotation, const Vec3& translation,
                      int width, int height) {
  if (width <= 0 || height <= 0)
    throw ConfigError("camera resolution must be positive");
  if (!(fx > 0) || !(fy > 0))
    throw ConfigError("camera focal lengths must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    throw ConfigError("camera principal point outside image");
  checkRotation(rotation);

  Camera c;
  c.fx_ = fx;
  c.fy_ = fy;
  c.cx_ = cx;
  c.cy_ = cy;
  c.rotation_ = rotation;
  c.translation_ = translation;
  c.width_ = width;
  c.height_ = height;
  return c;
}

Camera Camera::lookingForward(double fx, double fy, int width, int height,
                              const Vec3& center) {
  // t = -R c with R = I.
  return create(fx, fy, (width - 1) / 2.0, (height - 1) / 2.0,
                Mat3::identity(), Vec3{-center.x, -center.y, -center.z},
                width, height);
}

Camera Camera::cropped(int x0, int y0, int w, int h) const {
  PSW_CHECK(w > 0 && h > 0, "cropped viewport must be positive");
  Camera c = *this;
  c.cx_ -= x0;
  c.cy_ -= y0;
  c.width_ = w;
  c.height_ = h;
  return c;
}

Mat3 Camera::intrinsics() const {
  Mat3 k = Mat3::identity();
  k(0, 0) = fx_;
  k(1, 1) = fy_;
  k(0, 2) = cx_;
  k(1, 2) = cy_;
  return k;
}

Mat3 Camera::intrinsicsInverse() const {
  Mat3 k = Mat3::identity();
  k(0, 0) = 1.0 / fx_;
  k(1, 1) = 1.0 / fy_;
  k(0, 2) = -cx_ / fx_;
  k(1, 2) = -cy_ / fy_;
  return k;
}

Vec3 Camera::center() const {
  Vec3 rt = rotation_.transposed() * translation_;
  return {-rt.x, -rt.y, -rt.z};
}

Camera::Projection Camera::project(const Vec3& world) const {
  Vec3 cam = rotation_ * world + translation_;
  return {fx_ * cam.x / cam.z + cx_, fy_ * cam.y / cam.z + cy_, cam.z};
}

Vec3 Camera::pixelRayWorld(double u, double v) const {
  Vec3 dirCam{(u - cx_) / fx_, (v - cy_) / fy_, 1.0};
  return rotation_.transposed() * dirCam;
}

bool Camera::samePose(const Camera& o, double tol) const {
  for (int i = 0; i < 9; ++i)
    if (std::fabs(rotation_.m[i] - o.rotation_.m[i]) > tol) return false;
  Vec3 d = translation_ - o.translation_;
  return std::fabs(d.x) <= tol && std::fabs(d.y) <= tol &&
         std::fabs(d.z) <= tol;
}

}  // namespace psw
