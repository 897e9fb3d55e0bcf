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

#include "psw/mr/multires.hpp"

#include <algorithm>
#include <cmath>

namespace psw::mr {

void MrConfig::validate() const {
  if (patchSize < 1) throw ConfigError("mr patch size must be >= 1");
  if (threshold < kThresholdLo || threshold > kThresholdHi)
    throw ConfigError("mr threshold must lie in [1/200, 1/30], got " +
                      std::to_string(threshold));
}

ad::Tensor pooledPdf(const ad::Tensor& pdf, int patchSize) {
  PSW_CHECK(pdf.shape.rank() == 3, "pooledPdf expects (D, H, W)");
  PSW_CHECK(patchSize >= 1, "pooledPdf patch size must be >= 1");
  int d = pdf.shape[0], h = pdf.shape[1], w = pdf.shape[2];
  int ph = (h + patchSize - 1) / patchSize;
  int pw = (w + patchSize - 1) / patchSize;

  ad::Tensor out(ad::Shape{d, ph, pw}, 0.0);
  double inv = 1.0 / (double(patchSize) * patchSize);
  for (int k = 0; k < d; ++k) {
    for (int py = 0; py < ph; ++py) {
      for (int px = 0; px < pw; ++px) {
        double sum = 0;
        for (int dy = 0; dy < patchSize; ++dy) {
          int y = std::min(py * patchSize + dy, h - 1);  // edge replication
          for (int dx = 0; dx < patchSize; ++dx) {
            int x = std::min(px * patchSize + dx, w - 1);
            sum += pdf.data[(size_t(k) * h + y) * w + x];
          }
        }
        out.data[(size_t(k) * ph + py) * pw + px] = sum * inv;
      }
    }
  }
  return out;
}

DepthRange thresholdRange(const std::vector<double>& pooled,
                          const DepthLevels& levels, double threshold) {
  PSW_CHECK(int(pooled.size()) == levels.count(),
            "thresholdRange: pooled pdf and levels must agree");
  int first = -1, last = -1;
  for (int k = 0; k < levels.count(); ++k) {
    if (pooled[size_t(k)] >= threshold) {
      if (first < 0) first = k;
      last = k;
    }
  }

  DepthRange r;
  if (first < 0) {
    r.lo = levels.dMin();
    r.hi = levels.dMax();
    r.fullRangeFallback = true;
    return r;
  }
  if (first == last) {
    // Widen a single passing bin to its immediate neighbors.
    r.lo = levels[std::max(0, first - 1)];
    r.hi = levels[std::min(levels.count() - 1, last + 1)];
    r.singleHotExpanded = true;
    return r;
  }
  r.lo = levels[first];
  r.hi = levels[last];
  return r;
}

DepthLevels resampleLevels(const DepthRange& range, const DepthLevels& original,
                           DepthSpacing spacing) {
  double lo = std::max(range.lo, original.dMin());
  double hi = std::min(range.hi, original.dMax());
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) {
    lo = std::max(original.dMin(), lo * 0.95);
    hi = std::min(original.dMax(), hi * 1.05);
    if (lo == hi) {  // original span itself is degenerate-adjacent
      lo = original.dMin();
      hi = original.dMax();
    }
  }
  return makeDepthLevels(lo, hi, original.count(), spacing);
}

std::vector<double> pooledVectorAt(const ad::Tensor& pooled, int py, int px) {
  PSW_CHECK(pooled.shape.rank() == 3, "pooledVectorAt expects (D, ph, pw)");
  int d = pooled.shape[0], ph = pooled.shape[1], pw = pooled.shape[2];
  PSW_CHECK(py >= 0 && py < ph && px >= 0 && px < pw,
            "pooledVectorAt: patch index out of range");
  std::vector<double> v(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k)
    v[size_t(k)] = pooled.data[(size_t(k) * ph + py) * pw + px];
  return v;
}

}  // namespace psw::mr
