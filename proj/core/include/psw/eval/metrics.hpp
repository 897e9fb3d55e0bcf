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

#ifndef PSW_EVAL_METRICS_HPP
#define PSW_EVAL_METRICS_HPP

#include <string>
#include <vector>

#include "psw/image.hpp"

namespace psw::eval {

/// Mean structural similarity over an 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1.0. Evaluated per channel at
/// every fully-covered window position and averaged. Symmetric in its
/// arguments; ssim(x, x) == 1.
double ssim(const Image& a, const Image& b);

/// Per-pixel-per-channel mean absolute error scaled by 255 (the
/// evaluation convention for L1 tables).
double l1x255(const Image& a, const Image& b);

struct ViewMetrics {
  std::string viewId;
  double l1x255 = 0;
  double ssim = 0;
  int pairsUsed = 0;
  bool mr = false;
  int depths = 0;
};

struct EvalReport {
  std::vector<ViewMetrics> views;

  double meanL1() const;
  double meanSsim() const;
  /// CSV columns: view_id,l1_x255,ssim,pairs_used,mr,depths; final row
  /// aggregates the means under view_id "mean".
  void writeCsv(const std::string& path) const;
  std::string csv() const;
};

}  // namespace psw::eval

#endif  // PSW_EVAL_METRICS_HPP
