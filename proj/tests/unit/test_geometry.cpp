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

#include <doctest.h>

#include <cstring>

#include "psw/geometry/psv.hpp"
#include "test_support.hpp"

using namespace psw;

namespace {

Mat3 normalized(const Mat3& h) {
  Mat3 out = h;
  double s = h.m[8];
  REQUIRE(std::fabs(s) > 1e-300);
  for (double& v : out.m) v /= s;
  return out;
}

Camera rigCamera(double x, double y, double z, int w = 40, int h = 30,
                 double f = 35.0) {
  return Camera::lookingForward(f, f, w, h, Vec3{x, y, z});
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("camera validation") {
  CHECK_THROWS_AS(Camera::create(0, 1, 0, 0, Mat3::identity(), {}, 4, 4),
                  ConfigError);
  CHECK_THROWS_AS(Camera::create(10, 10, 5, 0, Mat3::identity(), {}, 4, 4),
                  ConfigError);
  Mat3 notRot = Mat3::identity();
  notRot(0, 0) = 1.5;
  CHECK_THROWS_AS(Camera::create(10, 10, 1, 1, notRot, {}, 4, 4), ConfigError);
  Mat3 mirror = Mat3::identity();
  mirror(0, 0) = -1;  // orthonormal but det -1
  CHECK_THROWS_AS(Camera::create(10, 10, 1, 1, mirror, {}, 4, 4), ConfigError);

  Camera c = rigCamera(0.5, -0.25, 1.0);
  Vec3 center = c.center();
  CHECK(center.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(center.y == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(center.z == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity homography for a shared pose") {
  Camera cam = rigCamera(0.3, 0.1, 0);
  for (double depth : {0.5, 3.0, 77.0}) {
    Mat3 h = normalized(planeHomography(cam, cam, depth));
    Mat3 eye = Mat3::identity();
    for (int i = 0; i < 9; ++i)
      CHECK(h.m[i] == doctest::Approx(eye.m[i]).epsilon(1e-12));
  }
}

TEST_CASE("homography matches brute-force plane projection") {
  // Project a grid of 3-D points on the sweep plane through both cameras
  // and compare with the induced map.
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    Camera virt = rigCamera(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
                            rng.uniform(-0.5, 0.5));
    Camera src = rigCamera(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
                           rng.uniform(-0.5, 0.5));
    double depth = rng.uniform(2.0, 20.0);
    Mat3 h = planeHomography(src, virt, depth);

    for (int gy = 0; gy < 4; ++gy)
      for (int gx = 0; gx < 4; ++gx) {
        double u = gx * 13.0, v = gy * 9.5;
        // Pixel (u, v) at plane depth in the virtual frame -> world point.
        Vec3 c = virt.center();
        Vec3 dir = virt.pixelRayWorld(u, v);  // unit z in camera frame
        Vec3 world = c + dir * depth;
        auto proj = src.project(world);

        Vec3 mapped = h * Vec3{u, v, 1.0};
        CHECK(mapped.x / mapped.z == doctest::Approx(proj.u).epsilon(1e-9));
        CHECK(mapped.y / mapped.z == doctest::Approx(proj.v).epsilon(1e-9));
      }
  }
}

TEST_CASE("rectified pair shifts by the classic disparity") {
  double f = 35.0, b = 0.4;
  Camera virt = rigCamera(0, 0, 0, 40, 30, f);
  Camera src = rigCamera(b, 0, 0, 40, 30, f);
  for (double depth : {2.0, 5.0, 11.0}) {
    Mat3 h = normalized(planeHomography(src, virt, depth));
    Vec3 p = h * Vec3{10, 7, 1};
    CHECK(p.x / p.z == doctest::Approx(10 - f * b / depth).epsilon(1e-12));
    CHECK(p.y / p.z == doctest::Approx(7.0).epsilon(1e-12));
  }
}

TEST_CASE("infinite-depth limit approaches the infinite homography") {
  Camera virt = rigCamera(0.2, -0.1, 0);
  Camera src = rigCamera(-0.4, 0.3, 0.2);
  Mat3 far = normalized(planeHomography(src, virt, 1e13));
  Mat3 inf = normalized(src.intrinsics() *
                        (src.rotation() * virt.rotation().transposed()) *
                        virt.intrinsicsInverse());
  for (int i = 0; i < 9; ++i)
    CHECK(far.m[i] == doctest::Approx(inf.m[i]).epsilon(1e-9));
}

TEST_CASE("homography composition is identity up to scale") {
  // Same-depth sweep planes seen from two cameras at equal z.
  Camera a = rigCamera(-0.3, 0.2, 0.0);
  Camera b = rigCamera(0.5, -0.1, 0.0);
  for (double depth : {1.5, 6.0, 40.0}) {
    Mat3 fwd = planeHomography(a, b, depth);   // b pixels -> a pixels
    Mat3 bwd = planeHomography(b, a, depth);   // a pixels -> b pixels
    Mat3 prod = normalized(fwd * bwd);
    Mat3 eye = Mat3::identity();
    for (int i = 0; i < 9; ++i)
      CHECK(std::fabs(prod.m[i] - eye.m[i]) < 1e-9);
  }
}

TEST_CASE("warp with identity is exact and fully valid") {
  Rng rng(7);
  Image img = testing::randomImage(13, 9, rng);
  WarpResult w = warpImage(img, Mat3::identity(), 13, 9);
  CHECK(maxAbsDiff(w.image, img) == 0.0);
  for (uint8_t v : w.validity) CHECK(v == 1);
}

TEST_CASE("warp with integer translation shifts and masks the edge") {
  Rng rng(8);
  Image img = testing::randomImage(6, 4, rng);
  Mat3 h = Mat3::identity();
  h(0, 2) = 1.0;  // output (x, y) samples source (x + 1, y)
  WarpResult w = warpImage(img, h, 6, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 5; ++x) {
      CHECK(w.validity[size_t(y) * 6 + x] == 1);
      for (int c = 0; c < 3; ++c)
        CHECK(w.image.at(c, y, x) == doctest::Approx(img.at(c, y, x + 1)));
    }
    CHECK(w.validity[size_t(y) * 6 + 5] == 0);
    for (int c = 0; c < 3; ++c) CHECK(w.image.at(c, y, 5) == 0.0);
  }
}

TEST_CASE("warp matches the scalar reference sampler") {
  Rng rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    Image img = testing::randomImage(17, 11, rng);
    Mat3 h = Mat3::identity();
    h(0, 0) = rng.uniform(0.6, 1.4);
    h(0, 1) = rng.uniform(-0.2, 0.2);
    h(0, 2) = rng.uniform(-3, 3);
    h(1, 0) = rng.uniform(-0.2, 0.2);
    h(1, 1) = rng.uniform(0.6, 1.4);
    h(1, 2) = rng.uniform(-3, 3);
    h(2, 0) = rng.uniform(-0.01, 0.01);
    h(2, 1) = rng.uniform(-0.01, 0.01);
    WarpResult w = warpImage(img, h, 15, 12);
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 15; ++x) {
        double ref[3];
        bool valid = testing::referenceWarpPixel(img, h, x, y, ref);
        CHECK(w.validity[size_t(y) * 15 + x] == (valid ? 1 : 0));
        for (int c = 0; c < 3; ++c) {
          double got = w.image.at(c, y, x);
          if (valid)
            CHECK(std::fabs(got - ref[c]) < 1e-12);
          else
            CHECK(got == 0.0);
        }
      }
  }
}

TEST_CASE("warp is deterministic") {
  Rng rng(123);
  Image img = testing::randomImage(20, 14, rng);
  Mat3 h = Mat3::identity();
  h(0, 2) = 0.37;
  h(2, 0) = 0.003;
  WarpResult a = warpImage(img, h, 18, 13);
  WarpResult b = warpImage(img, h, 18, 13);
  CHECK(std::memcmp(a.image.data.data(), b.image.data.data(),
                    a.image.data.size() * sizeof(double)) == 0);
  CHECK(a.validity == b.validity);
}

TEST_CASE("depth level construction") {
  DepthLevels two = makeDepthLevels(1, 100, 2, DepthSpacing::kInverseDepth);
  CHECK(two.values == std::vector<double>{1.0, 100.0});

  DepthLevels three = makeDepthLevels(1, 100, 3, DepthSpacing::kInverseDepth);
  // Mid inverse depth = (1 + 1/100) / 2 = 0.505.
  CHECK(three[1] == doctest::Approx(1.0 / 0.505).epsilon(1e-12));
  CHECK(three[0] == 1.0);
  CHECK(three[2] == 100.0);

  DepthLevels lin = makeDepthLevels(2, 10, 5, DepthSpacing::kLinear);
  for (int k = 0; k < 5; ++k)
    CHECK(lin[k] == doctest::Approx(2.0 + 2.0 * k).epsilon(1e-15));

  CHECK_THROWS_AS(makeDepthLevels(5, 5, 4, DepthSpacing::kLinear), ConfigError);
  CHECK_THROWS_AS(makeDepthLevels(9, 2, 4, DepthSpacing::kLinear), ConfigError);
  CHECK_THROWS_AS(makeDepthLevels(1, 2, 1, DepthSpacing::kLinear), ConfigError);
}

TEST_CASE("psv from a shared pose reproduces the source at every level") {
  Rng rng(5);
  Image img = testing::randomImage(24, 18, rng);
  Camera cam = rigCamera(0.1, 0.2, 0.3, 24, 18);
  DepthLevels levels = makeDepthLevels(1, 50, 5, DepthSpacing::kInverseDepth);
  PlaneSweepVolume psv = buildPSV(img, cam, cam, levels);
  REQUIRE(psv.depthCount() == 5);
  for (const Image& plane : psv.planes) CHECK(maxAbsDiff(plane, img) == 0.0);
  CHECK(psv.validFraction() == 1.0);
}

TEST_CASE("psv shape contract and invariants") {
  Rng rng(6);
  Image img = testing::randomImage(112, 112, rng);
  Camera src = rigCamera(0.2, 0, 0, 112, 112, 90);
  Camera virt = rigCamera(0, 0, 0, 112, 112, 90);
  DepthLevels levels = makeDepthLevels(2, 40, 64, DepthSpacing::kInverseDepth);
  PlaneSweepVolume psv = buildPSV(img, src, virt, levels);
  CHECK(psv.depthCount() == 64);
  CHECK(psv.width() == 112);
  CHECK(psv.height() == 112);
  for (size_t k = 0; k < psv.planes.size(); ++k) {
    CHECK(psv.planes[k].width == 112);
    CHECK(psv.planes[k].height == 112);
  }
  psv.validate();  // masked samples are zero, counts agree

  Image wrongSize = testing::randomImage(64, 64, rng);
  CHECK_THROWS_AS(buildPSV(wrongSize, src, virt, levels), ShapeError);
}

TEST_SUITE_END();
