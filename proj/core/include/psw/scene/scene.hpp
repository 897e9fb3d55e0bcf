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

#ifndef PSW_SCENE_SCENE_HPP
#define PSW_SCENE_SCENE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "psw/geometry/camera.hpp"
#include "psw/image.hpp"

namespace psw::scene {

/// Procedural unlit albedo. Noise is seeded value noise (smooth), checker
/// is a hard two-color grid; both are deterministic functions of the
/// surface coordinates.
struct TextureSpec {
  enum class Kind { kChecker, kNoise };
  Kind kind = Kind::kNoise;
  uint64_t seed = 1;
  double scale = 1.0;  // feature size in world units
  int octaves = 3;     // noise only
  std::array<double, 3> colorA{0.85, 0.55, 0.15};
  std::array<double, 3> colorB{0.10, 0.35, 0.80};

  std::array<double, 3> sample(double u, double v) const;
};

/// Fronto-parallel rectangle at world z = depth.
struct PlanePrim {
  double depth = 1.0;
  double xMin = -1, xMax = 1, yMin = -1, yMax = 1;
  TextureSpec texture;
};

/// Axis-aligned box; faces textured by their in-plane coordinates.
struct BoxPrim {
  Vec3 boxMin, boxMax;
  TextureSpec texture;
};

struct RigSpec {
  enum class Kind { kLine, kGrid, kList };
  Kind kind = Kind::kLine;
  int count = 5;             // line rigs (odd; middle camera is the target)
  int rows = 2, cols = 2;    // grid rigs (inputs; target at the centroid)
  double baseline = 0.2;     // camera spacing, world units
  double fx = 140, fy = 140;
  int width = 160, height = 120;
  Vec3 origin{};             // rig center
  Vec3 jitter{};             // per-sample origin jitter amplitude
  std::vector<Camera> cameras;  // list rigs
  int targetIndex = -1;         // list rigs; -1 = middle
};

struct SceneSpec {
  uint64_t seed = 1;
  double dMin = 1.0, dMax = 100.0;  // declared sweep band
  std::array<double, 3> background{0, 0, 0};
  std::vector<PlanePrim> planes;
  std::vector<BoxPrim> boxes;
  RigSpec rig;

  void validate() const;

  /// Structured text format: `[scene]` / `[plane]` / `[box]` / `[rig]`
  /// sections of `key = value` lines, '#' comments. See README for the
  /// grammar.
  static SceneSpec parse(const std::string& text);
  static SceneSpec loadFile(const std::string& path);
};

struct RenderResult {
  Image image;
  Grid depth;  // camera-frame z of the nearest hit; 0 = background
};

/// Ray-casts the nearest primitive at every pixel center. Deterministic
/// for a fixed spec.
RenderResult renderView(const SceneSpec& scene, const Camera& camera);

/// True when `point` is seen from the camera with no closer hit along
/// the ray (within `tol` of the point's own ray distance).
bool pointVisible(const SceneSpec& scene, const Camera& camera,
                  const Vec3& point, double tol = 1e-6);

/// One training/eval example: posed inputs, a held-out target view, and
/// the target's analytic depth when available.
struct DatasetSample {
  std::vector<Image> inputs;
  std::vector<Camera> inputCameras;
  Image target;
  Camera targetCamera;
  std::optional<Grid> targetDepth;
  // Pairing metadata.
  std::string rigKind = "line";  // line | grid | list
  int gridRows = 0, gridCols = 0;
  // Declared sweep band of the generating scene (0 when unknown).
  double depthBandMin = 0, depthBandMax = 0;

  void validate() const;
};

/// Cameras of the rig instanced at `originShift` from its declared
/// origin, plus the index of the target camera.
struct RigInstance {
  std::vector<Camera> cameras;
  int targetIndex;
};
RigInstance instanceRig(const SceneSpec& scene, const Vec3& originShift);

/// Renders a full sample from the scene's rig. `originShift` jitters the
/// rig (used to generate distinct train/eval views).
DatasetSample makeSample(const SceneSpec& scene, const Vec3& originShift = {});

/// Line rig of `n` cameras (n odd) spaced `rigBaseline` apart along +x;
/// the middle view is the target, the remaining n-1 are inputs, paired
/// adjacently downstream.
DatasetSample makeKittiLikeSequence(const SceneSpec& scene, double rigBaseline,
                                    int n = 5, const Vec3& originShift = {});

}  // namespace psw::scene

#endif  // PSW_SCENE_SCENE_HPP
