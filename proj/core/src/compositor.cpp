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

#include "psw/compose/compositor.hpp"

#include <cmath>

namespace psw::compose {

PairEstimate synthesizePerPair(const ad::Tensor& volumeA,
                               const ad::Tensor& volumeB,
                               const net::DepthInference& inference) {
  const ad::Shape& ps = inference.pdf.shape();
  auto checkVolume = [&](const ad::Tensor& v, const char* which) {
    if (v.shape.rank() != 4 || v.shape[0] != ps[1] || v.shape[1] != 3 ||
        v.shape[2] != ps[2] || v.shape[3] != ps[3])
      throw ShapeError(std::string("synthesizePerPair: ") + which +
                       " must be (D,3,h,w) matching the pdf; got " +
                       v.shape.str() + " for pdf " + ps.str());
  };
  checkVolume(volumeA, "volumeA");
  checkVolume(volumeB, "volumeB");

  PairEstimate est;
  est.viewBarA = ad::pdfBlend(inference.pdf, volumeA);
  est.viewBarB = ad::pdfBlend(inference.pdf, volumeB);
  ad::Var confA = ad::sliceChannels(inference.confidence, 0, 1);
  ad::Var confB = ad::sliceChannels(inference.confidence, 1, 2);
  est.fused = ad::add(ad::mulPlane(est.viewBarA, confA),
                      ad::mulPlane(est.viewBarB, confB));
  est.occlusionLogit = inference.occlusionLogit;
  return est;
}

FinalEstimate fusePairs(const std::vector<PairEstimate>& estimates) {
  if (estimates.empty())
    throw ShapeError("fusePairs: need at least one pair estimate");

  std::vector<ad::Var> images, logits;
  images.reserve(estimates.size());
  logits.reserve(estimates.size());
  for (const PairEstimate& e : estimates) {
    images.push_back(e.fused);
    logits.push_back(e.occlusionLogit);
  }

  FinalEstimate out;
  out.image = ad::fusePairs(images, logits);

  // Normalized weights recomputed on plain values for reporting.
  int h = out.image.shape()[2], w = out.image.shape()[3];
  size_t plane = size_t(h) * w;
  out.perPairWeights.assign(estimates.size(), Grid(w, h));
  for (size_t i = 0; i < plane; ++i) {
    double mx = logits[0].value().data[i];
    for (size_t p = 1; p < logits.size(); ++p)
      mx = std::max(mx, logits[p].value().data[i]);
    double sum = 0;
    for (size_t p = 0; p < logits.size(); ++p) {
      double e = std::exp(logits[p].value().data[i] - mx);
      out.perPairWeights[p].data[i] = e;
      sum += e;
    }
    for (size_t p = 0; p < logits.size(); ++p)
      out.perPairWeights[p].data[i] /= sum;
  }
  return out;
}

ad::Var l1Loss(const ad::Var& pred, const Image& groundTruth) {
  return ad::l1Loss(pred, ad::Var::constant(imageTensor(groundTruth)));
}

double l1MetricX255(const Image& pred, const Image& gt) {
  return meanAbsDiff(pred, gt) * 255.0;
}

Image varToImage(const ad::Var& v) {
  const ad::Shape& s = v.shape();
  PSW_CHECK(s.rank() == 4 && s[0] == 1 && s[1] == 3,
            "varToImage expects (1,3,h,w)");
  Image img(s[3], s[2]);
  img.data = v.value().data;
  return img;
}

ad::Tensor imageTensor(const Image& img) {
  ad::Tensor t(ad::Shape{1, 3, img.height, img.width});
  t.data = img.data;
  return t;
}

ad::Tensor centralCrop(const ad::Tensor& volume, int margin) {
  const ad::Shape& s = volume.shape;
  PSW_CHECK(s.rank() == 4, "centralCrop expects rank-4 volume");
  int d = s[0], c = s[1], h = s[2], w = s[3];
  PSW_CHECK(h > 2 * margin && w > 2 * margin, "centralCrop margin too large");
  int oh = h - 2 * margin, ow = w - 2 * margin;
  ad::Tensor out(ad::Shape{d, c, oh, ow});
  for (int k = 0; k < d; ++k)
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < oh; ++y) {
        const double* src =
            &volume.data[((size_t(k) * c + ch) * h + y + margin) * w + margin];
        double* dst = &out.data[((size_t(k) * c + ch) * oh + y) * ow];
        std::copy(src, src + ow, dst);
      }
  return out;
}

}  // namespace psw::compose
