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

#include "psw/eval/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace psw::eval {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr double kC1 = (kK1 * 1.0) * (kK1 * 1.0);
constexpr double kC2 = (kK2 * 1.0) * (kK2 * 1.0);

const std::vector<double>& gaussianKernel() {
  static const std::vector<double> kernel = [] {
    std::vector<double> k(kWindow);
    double sum = 0;
    for (int i = 0; i < kWindow; ++i) {
      double d = i - (kWindow - 1) / 2.0;
      k[size_t(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
      sum += k[size_t(i)];
    }
    for (double& v : k) v /= sum;
    return k;
  }();
  return kernel;
}

// Separable Gaussian filter, valid positions only:
// (h - 10) x (w - 10) output.
Grid gaussValid(const Grid& in) {
  const auto& k = gaussianKernel();
  int w = in.width, h = in.height;
  int ow = w - kWindow + 1, oh = h - kWindow + 1;
  Grid tmp(ow, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int i = 0; i < kWindow; ++i) s += k[size_t(i)] * in.at(y, x + i);
      tmp.at(y, x) = s;
    }
  Grid out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int i = 0; i < kWindow; ++i) s += k[size_t(i)] * tmp.at(y + i, x);
      out.at(y, x) = s;
    }
  return out;
}

Grid channelGrid(const Image& img, int c) {
  Grid g(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) g.at(y, x) = img.at(c, y, x);
  return g;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  if (!a.sameSize(b)) throw ShapeError("ssim: image sizes differ");
  if (a.width < kWindow || a.height < kWindow)
    throw ShapeError("ssim needs images of at least 11x11");

  double total = 0;
  for (int c = 0; c < 3; ++c) {
    Grid ga = channelGrid(a, c);
    Grid gb = channelGrid(b, c);
    Grid gaa(ga.width, ga.height), gbb(ga.width, ga.height),
        gab(ga.width, ga.height);
    for (size_t i = 0; i < ga.data.size(); ++i) {
      gaa.data[i] = ga.data[i] * ga.data[i];
      gbb.data[i] = gb.data[i] * gb.data[i];
      gab.data[i] = ga.data[i] * gb.data[i];
    }
    Grid muA = gaussValid(ga);
    Grid muB = gaussValid(gb);
    Grid sAA = gaussValid(gaa);
    Grid sBB = gaussValid(gbb);
    Grid sAB = gaussValid(gab);

    double sum = 0;
    for (size_t i = 0; i < muA.data.size(); ++i) {
      double ma = muA.data[i], mb = muB.data[i];
      double va = sAA.data[i] - ma * ma;
      double vb = sBB.data[i] - mb * mb;
      double cov = sAB.data[i] - ma * mb;
      sum += ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
    }
    total += sum / double(muA.data.size());
  }
  return total / 3.0;
}

double l1x255(const Image& a, const Image& b) {
  return meanAbsDiff(a, b) * 255.0;
}

double EvalReport::meanL1() const {
  double s = 0;
  for (const ViewMetrics& v : views) s += v.l1x255;
  return views.empty() ? 0.0 : s / double(views.size());
}

double EvalReport::meanSsim() const {
  double s = 0;
  for (const ViewMetrics& v : views) s += v.ssim;
  return views.empty() ? 0.0 : s / double(views.size());
}

std::string EvalReport::csv() const {
  std::ostringstream os;
  os << "view_id,l1_x255,ssim,pairs_used,mr,depths\n";
  char buf[192];
  for (const ViewMetrics& v : views) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%d,%d,%d\n",
                  v.viewId.c_str(), v.l1x255, v.ssim, v.pairsUsed,
                  v.mr ? 1 : 0, v.depths);
    os << buf;
  }
  if (!views.empty()) {
    std::snprintf(buf, sizeof(buf), "mean,%.6f,%.6f,%d,%d,%d\n", meanL1(),
                  meanSsim(), views.front().pairsUsed,
                  views.front().mr ? 1 : 0, views.front().depths);
    os << buf;
  }
  return os.str();
}

void EvalReport::writeCsv(const std::string& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("cannot write eval report: " + path);
  f << csv();
}

}  // namespace psw::eval
