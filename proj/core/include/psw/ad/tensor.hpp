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

#ifndef PSW_AD_TENSOR_HPP
#define PSW_AD_TENSOR_HPP

#include <string>
#include <vector>

#include "psw/common.hpp"

namespace psw::ad {

/// Dense shape, rank 1..4. Rank-4 tensors follow (batch, channel, h, w).
struct Shape {
  std::vector<int> dims;

  Shape() = default;
  Shape(std::initializer_list<int> d) : dims(d) {}
  explicit Shape(std::vector<int> d) : dims(std::move(d)) {}

  int rank() const { return int(dims.size()); }
  int operator[](int i) const { return dims[size_t(i)]; }
  size_t numel() const {
    size_t n = 1;
    for (int d : dims) n *= size_t(d);
    return dims.empty() ? 0 : n;
  }
  bool operator==(const Shape& o) const { return dims == o.dims; }
  bool operator!=(const Shape& o) const { return dims != o.dims; }
  std::string str() const;
};

/// 64-bit dense tensor, row-major.
struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0)
      : shape(std::move(s)), data(shape.numel(), fill) {}

  static Tensor scalar(double v) {
    Tensor t(Shape{1});
    t.data[0] = v;
    return t;
  }

  size_t numel() const { return data.size(); }
  double& operator[](size_t i) { return data[i]; }
  double operator[](size_t i) const { return data[i]; }

  // Rank-4 accessor.
  double& at(int n, int c, int y, int x) {
    const auto& d = shape.dims;
    return data[((size_t(n) * d[1] + c) * d[2] + y) * d[3] + x];
  }
  double at(int n, int c, int y, int x) const {
    const auto& d = shape.dims;
    return data[((size_t(n) * d[1] + c) * d[2] + y) * d[3] + x];
  }

  bool allFinite() const;

  /// Throws ShapeError unless shapes match.
  void requireShape(const Shape& s, const char* what) const;
};

}  // namespace psw::ad

#endif  // PSW_AD_TENSOR_HPP
