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

#include "psw/scene/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace psw::scene {

namespace {

// Hashed lattice value in [0, 1).
double latticeValue(int64_t ix, int64_t iy, uint64_t seed) {
  uint64_t h = seed + 0x9e3779b97f4a7c15ULL;
  h ^= uint64_t(ix) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 30)) * 0x94d049bb133111ebULL;
  h ^= uint64_t(iy) * 0xc2b2ae3d27d4eb4fULL;
  h = (h ^ (h >> 27)) * 0x9e3779b97f4a7c15ULL;
  h ^= h >> 31;
  return double(h >> 11) * 0x1.0p-53;
}

double fade(double t) { return t * t * (3.0 - 2.0 * t); }

double valueNoise(double u, double v, uint64_t seed) {
  double fu = std::floor(u);
  double fv = std::floor(v);
  auto iu = int64_t(fu);
  auto iv = int64_t(fv);
  double tu = fade(u - fu);
  double tv = fade(v - fv);
  double v00 = latticeValue(iu, iv, seed);
  double v10 = latticeValue(iu + 1, iv, seed);
  double v01 = latticeValue(iu, iv + 1, seed);
  double v11 = latticeValue(iu + 1, iv + 1, seed);
  double a = v00 + (v10 - v00) * tu;
  double b = v01 + (v11 - v01) * tu;
  return a + (b - a) * tv;
}

}  // namespace

std::array<double, 3> TextureSpec::sample(double u, double v) const {
  if (kind == Kind::kChecker) {
    auto iu = int64_t(std::floor(u / scale));
    auto iv = int64_t(std::floor(v / scale));
    return ((iu + iv) & 1) ? colorB : colorA;
  }
  // Channel-independent octave noise; correlated channels would leave
  // flat spots in all three channels at once.
  std::array<double, 3> out;
  for (int c = 0; c < 3; ++c) {
    double amp = 1.0, freq = 1.0 / scale, total = 0.0, norm = 0.0;
    uint64_t channelSeed = seed + uint64_t(c) * 0x9e37ULL;
    for (int o = 0; o < std::max(1, octaves); ++o) {
      total += amp * valueNoise(u * freq, v * freq,
                                channelSeed + uint64_t(o) * 0x51ULL);
      norm += amp;
      amp *= 0.5;
      freq *= 2.0;
    }
    double t = total / norm;
    out[size_t(c)] = colorA[size_t(c)] + (colorB[size_t(c)] - colorA[size_t(c)]) * t;
  }
  return out;
}

void SceneSpec::validate() const {
  if (!(dMin > 0) || !(dMin < dMax))
    throw ConfigError("scene depth band requires 0 < dmin < dmax");
  for (const PlanePrim& p : planes) {
    if (!(p.xMin < p.xMax) || !(p.yMin < p.yMax))
      throw ConfigError("plane extent must be non-empty");
  }
  for (const BoxPrim& b : boxes) {
    if (!(b.boxMin.x < b.boxMax.x) || !(b.boxMin.y < b.boxMax.y) ||
        !(b.boxMin.z < b.boxMax.z))
      throw ConfigError("box extent must be non-empty");
  }
  if (rig.kind == RigSpec::Kind::kLine) {
    if (rig.count < 2 || rig.count % 2 == 0)
      throw ConfigError("line rig needs an odd camera count >= 3");
  } else if (rig.kind == RigSpec::Kind::kGrid) {
    if (rig.rows < 1 || rig.cols < 1 || rig.rows * rig.cols < 2)
      throw ConfigError("grid rig needs at least two cameras");
  } else if (rig.cameras.size() < 2) {
    throw ConfigError("list rig needs at least two cameras");
  }
}

namespace {

struct Hit {
  double rayT = std::numeric_limits<double>::infinity();
  std::array<double, 3> color{};
  bool hit = false;
  Vec3 point{};
};

void intersectScene(const SceneSpec& scene, const Vec3& origin,
                    const Vec3& dir, Hit& best) {
  constexpr double kNear = 1e-9;
  for (const PlanePrim& p : scene.planes) {
    if (std::fabs(dir.z) < 1e-15) continue;
    double t = (p.depth - origin.z) / dir.z;
    if (t <= kNear || t >= best.rayT) continue;
    double hx = origin.x + t * dir.x;
    double hy = origin.y + t * dir.y;
    if (hx < p.xMin || hx > p.xMax || hy < p.yMin || hy > p.yMax) continue;
    best.rayT = t;
    best.hit = true;
    best.point = {hx, hy, p.depth};
    best.color = p.texture.sample(hx, hy);
  }
  for (const BoxPrim& b : scene.boxes) {
    double t0 = kNear, t1 = best.rayT;
    int axis = -1;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    const double lo[3] = {b.boxMin.x, b.boxMin.y, b.boxMin.z};
    const double hi[3] = {b.boxMax.x, b.boxMax.y, b.boxMax.z};
    bool miss = false;
    for (int a = 0; a < 3 && !miss; ++a) {
      if (std::fabs(d[a]) < 1e-15) {
        if (o[a] < lo[a] || o[a] > hi[a]) miss = true;
        continue;
      }
      double ta = (lo[a] - o[a]) / d[a];
      double tb = (hi[a] - o[a]) / d[a];
      if (ta > tb) std::swap(ta, tb);
      if (ta > t0) {
        t0 = ta;
        axis = a;
      }
      t1 = std::min(t1, tb);
      if (t0 > t1) miss = true;
    }
    if (miss || axis < 0 || t0 >= best.rayT) continue;
    Vec3 hp = origin + dir * t0;
    double u, v;
    if (axis == 0) {
      u = hp.y;
      v = hp.z;
    } else if (axis == 1) {
      u = hp.x;
      v = hp.z;
    } else {
      u = hp.x;
      v = hp.y;
    }
    best.rayT = t0;
    best.hit = true;
    best.point = hp;
    best.color = b.texture.sample(u, v);
  }
}

}  // namespace

RenderResult renderView(const SceneSpec& scene, const Camera& camera) {
  RenderResult out;
  out.image = Image(camera.width(), camera.height());
  out.depth = Grid(camera.width(), camera.height(), 0.0);
  const Vec3 origin = camera.center();

  for (int y = 0; y < camera.height(); ++y) {
    for (int x = 0; x < camera.width(); ++x) {
      Vec3 dir = camera.pixelRayWorld(double(x), double(y));
      Hit hit;
      intersectScene(scene, origin, dir, hit);
      if (hit.hit) {
        for (int c = 0; c < 3; ++c) out.image.at(c, y, x) = hit.color[c];
        Vec3 cam = camera.rotation() * hit.point + camera.translation();
        out.depth.at(y, x) = cam.z;
      } else {
        for (int c = 0; c < 3; ++c)
          out.image.at(c, y, x) = scene.background[c];
      }
    }
  }
  return out;
}

bool pointVisible(const SceneSpec& scene, const Camera& camera,
                  const Vec3& point, double tol) {
  Vec3 origin = camera.center();
  Vec3 dir = point - origin;
  double dist = dir.norm();
  if (dist < tol) return true;
  dir = dir * (1.0 / dist);
  Hit hit;
  intersectScene(scene, origin, dir, hit);
  return !hit.hit || hit.rayT >= dist - tol;
}

// --- Spec file parsing ---------------------------------------------------

namespace {

struct KeyValue {
  std::string section;
  std::string key;
  std::vector<std::string> values;
  int line;
};

std::vector<double> numbers(const KeyValue& kv, size_t n) {
  if (kv.values.size() != n)
    throw ConfigError("scene spec line " + std::to_string(kv.line) + ": '" +
                      kv.key + "' expects " + std::to_string(n) + " value(s)");
  std::vector<double> out;
  for (const std::string& s : kv.values) {
    try {
      out.push_back(std::stod(s));
    } catch (...) {
      throw ConfigError("scene spec line " + std::to_string(kv.line) +
                        ": bad number '" + s + "'");
    }
  }
  return out;
}

void applyTextureKey(TextureSpec& tex, const KeyValue& kv, bool& handled) {
  handled = true;
  if (kv.key == "texture") {
    if (kv.values.size() == 1 && kv.values[0] == "checker")
      tex.kind = TextureSpec::Kind::kChecker;
    else if (kv.values.size() == 1 && kv.values[0] == "noise")
      tex.kind = TextureSpec::Kind::kNoise;
    else
      throw ConfigError("scene spec line " + std::to_string(kv.line) +
                        ": texture must be 'checker' or 'noise'");
  } else if (kv.key == "scale") {
    tex.scale = numbers(kv, 1)[0];
    if (!(tex.scale > 0))
      throw ConfigError("scene spec line " + std::to_string(kv.line) +
                        ": texture scale must be positive");
  } else if (kv.key == "octaves") {
    tex.octaves = int(numbers(kv, 1)[0]);
  } else if (kv.key == "tex_seed") {
    tex.seed = uint64_t(numbers(kv, 1)[0]);
  } else if (kv.key == "color_a") {
    auto v = numbers(kv, 3);
    tex.colorA = {v[0], v[1], v[2]};
  } else if (kv.key == "color_b") {
    auto v = numbers(kv, 3);
    tex.colorB = {v[0], v[1], v[2]};
  } else {
    handled = false;
  }
}

}  // namespace

SceneSpec SceneSpec::parse(const std::string& text) {
  SceneSpec spec;
  spec.planes.clear();
  spec.boxes.clear();

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineNo = 0;
  std::vector<KeyValue> pending;

  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string first;
    if (!(is >> first)) continue;
    if (first.size() >= 2 && first.front() == '[' && first.back() == ']') {
      section = first.substr(1, first.size() - 2);
      if (section != "scene" && section != "plane" && section != "box" &&
          section != "rig")
        throw ConfigError("scene spec line " + std::to_string(lineNo) +
                          ": unknown section '" + section + "'");
      if (section == "plane") spec.planes.emplace_back();
      if (section == "box") spec.boxes.emplace_back();
      continue;
    }
    if (section.empty())
      throw ConfigError("scene spec line " + std::to_string(lineNo) +
                        ": key before any section");
    // key = v1 v2 ...
    std::string eq;
    if (!(is >> eq) || eq != "=")
      throw ConfigError("scene spec line " + std::to_string(lineNo) +
                        ": expected 'key = value'");
    KeyValue kv{section, first, {}, lineNo};
    std::string tok;
    while (is >> tok) kv.values.push_back(tok);
    if (kv.values.empty())
      throw ConfigError("scene spec line " + std::to_string(lineNo) +
                        ": missing value for '" + kv.key + "'");

    if (section == "scene") {
      if (kv.key == "seed")
        spec.seed = uint64_t(numbers(kv, 1)[0]);
      else if (kv.key == "dmin")
        spec.dMin = numbers(kv, 1)[0];
      else if (kv.key == "dmax")
        spec.dMax = numbers(kv, 1)[0];
      else if (kv.key == "background") {
        auto v = numbers(kv, 3);
        spec.background = {v[0], v[1], v[2]};
      } else
        throw ConfigError("scene spec line " + std::to_string(lineNo) +
                          ": unknown scene key '" + kv.key + "'");
    } else if (section == "plane") {
      PlanePrim& p = spec.planes.back();
      bool handled = false;
      applyTextureKey(p.texture, kv, handled);
      if (handled) continue;
      if (kv.key == "depth")
        p.depth = numbers(kv, 1)[0];
      else if (kv.key == "extent") {
        auto v = numbers(kv, 4);
        p.xMin = v[0];
        p.xMax = v[1];
        p.yMin = v[2];
        p.yMax = v[3];
      } else
        throw ConfigError("scene spec line " + std::to_string(lineNo) +
                          ": unknown plane key '" + kv.key + "'");
    } else if (section == "box") {
      BoxPrim& b = spec.boxes.back();
      bool handled = false;
      applyTextureKey(b.texture, kv, handled);
      if (handled) continue;
      if (kv.key == "min") {
        auto v = numbers(kv, 3);
        b.boxMin = {v[0], v[1], v[2]};
      } else if (kv.key == "max") {
        auto v = numbers(kv, 3);
        b.boxMax = {v[0], v[1], v[2]};
      } else
        throw ConfigError("scene spec line " + std::to_string(lineNo) +
                          ": unknown box key '" + kv.key + "'");
    } else {  // rig
      RigSpec& r = spec.rig;
      if (kv.key == "kind") {
        const std::string& k = kv.values[0];
        if (k == "line")
          r.kind = RigSpec::Kind::kLine;
        else if (k == "grid")
          r.kind = RigSpec::Kind::kGrid;
        else if (k == "list")
          r.kind = RigSpec::Kind::kList;
        else
          throw ConfigError("scene spec line " + std::to_string(lineNo) +
                            ": rig kind must be line|grid|list");
      } else if (kv.key == "count")
        r.count = int(numbers(kv, 1)[0]);
      else if (kv.key == "rows")
        r.rows = int(numbers(kv, 1)[0]);
      else if (kv.key == "cols")
        r.cols = int(numbers(kv, 1)[0]);
      else if (kv.key == "baseline")
        r.baseline = numbers(kv, 1)[0];
      else if (kv.key == "fx")
        r.fx = numbers(kv, 1)[0];
      else if (kv.key == "fy")
        r.fy = numbers(kv, 1)[0];
      else if (kv.key == "width")
        r.width = int(numbers(kv, 1)[0]);
      else if (kv.key == "height")
        r.height = int(numbers(kv, 1)[0]);
      else if (kv.key == "origin") {
        auto v = numbers(kv, 3);
        r.origin = {v[0], v[1], v[2]};
      } else if (kv.key == "jitter") {
        auto v = numbers(kv, 3);
        r.jitter = {v[0], v[1], v[2]};
      } else if (kv.key == "target") {
        r.targetIndex = int(numbers(kv, 1)[0]);
      } else if (kv.key == "cam") {
        // cam = <x> <y> <z>: camera at that position, forward-looking,
        // sharing the rig intrinsics.
        auto v = numbers(kv, 3);
        r.cameras.push_back(Camera::lookingForward(r.fx, r.fy, r.width,
                                                   r.height,
                                                   Vec3{v[0], v[1], v[2]}));
      } else
        throw ConfigError("scene spec line " + std::to_string(lineNo) +
                          ": unknown rig key '" + kv.key + "'");
    }
  }

  spec.validate();
  return spec;
}

SceneSpec SceneSpec::loadFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open scene spec: " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return parse(text);
}

// --- Rigs and samples ----------------------------------------------------

RigInstance instanceRig(const SceneSpec& scene, const Vec3& originShift) {
  const RigSpec& rig = scene.rig;
  RigInstance inst;
  Vec3 base = rig.origin + originShift;

  if (rig.kind == RigSpec::Kind::kLine) {
    double half = (rig.count - 1) / 2.0;
    for (int i = 0; i < rig.count; ++i) {
      Vec3 pos = base + Vec3{(i - half) * rig.baseline, 0, 0};
      inst.cameras.push_back(
          Camera::lookingForward(rig.fx, rig.fy, rig.width, rig.height, pos));
    }
    inst.targetIndex = rig.count / 2;
  } else if (rig.kind == RigSpec::Kind::kGrid) {
    double halfR = (rig.rows - 1) / 2.0;
    double halfC = (rig.cols - 1) / 2.0;
    for (int r = 0; r < rig.rows; ++r)
      for (int c = 0; c < rig.cols; ++c) {
        Vec3 pos = base + Vec3{(c - halfC) * rig.baseline,
                               (r - halfR) * rig.baseline, 0};
        inst.cameras.push_back(Camera::lookingForward(rig.fx, rig.fy,
                                                      rig.width, rig.height,
                                                      pos));
      }
    // Target at the grid centroid, appended after the inputs.
    inst.cameras.push_back(
        Camera::lookingForward(rig.fx, rig.fy, rig.width, rig.height, base));
    inst.targetIndex = int(inst.cameras.size()) - 1;
  } else {
    for (const Camera& c : rig.cameras) {
      Vec3 pos = c.center() + originShift;
      inst.cameras.push_back(Camera::lookingForward(
          c.fx(), c.fy(), c.width(), c.height(), pos));
    }
    inst.targetIndex = rig.targetIndex >= 0 ? rig.targetIndex
                                            : int(inst.cameras.size()) / 2;
    if (inst.targetIndex >= int(inst.cameras.size()))
      throw ConfigError("rig target index out of range");
  }
  return inst;
}

DatasetSample makeSample(const SceneSpec& scene, const Vec3& originShift) {
  RigInstance inst = instanceRig(scene, originShift);
  DatasetSample sample;
  for (int i = 0; i < int(inst.cameras.size()); ++i) {
    RenderResult r = renderView(scene, inst.cameras[size_t(i)]);
    if (i == inst.targetIndex) {
      sample.target = std::move(r.image);
      sample.targetCamera = inst.cameras[size_t(i)];
      sample.targetDepth = std::move(r.depth);
    } else {
      sample.inputs.push_back(std::move(r.image));
      sample.inputCameras.push_back(inst.cameras[size_t(i)]);
    }
  }
  sample.depthBandMin = scene.dMin;
  sample.depthBandMax = scene.dMax;
  switch (scene.rig.kind) {
    case RigSpec::Kind::kLine:
      sample.rigKind = "line";
      break;
    case RigSpec::Kind::kGrid:
      sample.rigKind = "grid";
      sample.gridRows = scene.rig.rows;
      sample.gridCols = scene.rig.cols;
      break;
    case RigSpec::Kind::kList:
      sample.rigKind = "list";
      break;
  }
  sample.validate();
  return sample;
}

DatasetSample makeKittiLikeSequence(const SceneSpec& scene, double rigBaseline,
                                    int n, const Vec3& originShift) {
  if (n < 3 || n % 2 == 0)
    throw ConfigError("sequence length must be odd and >= 3");
  SceneSpec seq = scene;
  seq.rig.kind = RigSpec::Kind::kLine;
  seq.rig.count = n;
  seq.rig.baseline = rigBaseline;
  return makeSample(seq, originShift);
}

void DatasetSample::validate() const {
  PSW_CHECK(!inputs.empty(), "sample needs at least one input view");
  PSW_CHECK(inputs.size() == inputCameras.size(),
            "sample inputs and cameras must pair up");
  PSW_CHECK(target.width > 0, "sample target image missing");
  for (const Image& img : inputs)
    PSW_CHECK(img.sameSize(target), "sample images must share one size");
  if (targetDepth) {
    PSW_CHECK(targetDepth->width == target.width &&
                  targetDepth->height == target.height,
              "depth map must match the target image");
    for (double d : targetDepth->data)
      PSW_CHECK(d >= 0, "depth map entries must be >= 0");
  }
}

}  // namespace psw::scene
