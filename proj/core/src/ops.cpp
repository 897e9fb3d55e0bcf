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

#include "psw/ad/ops.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstring>

namespace psw::ad {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ConvDims {
  int n, inC, h, w, outC, k, pad, oh, ow;
};

ConvDims convDims(const Shape& x, const Shape& weight, Padding padding) {
  if (x.rank() != 4 || weight.rank() != 4)
    throw ShapeError("conv2d expects rank-4 input and weight");
  ConvDims d{};
  d.n = x[0];
  d.inC = x[1];
  d.h = x[2];
  d.w = x[3];
  d.outC = weight[0];
  d.k = weight[2];
  if (weight[2] != weight[3]) throw ShapeError("conv2d kernels are square");
  if (weight[1] != d.inC)
    throw ShapeError("conv2d channel mismatch: input has " +
                     std::to_string(d.inC) + ", kernel expects " +
                     std::to_string(weight[1]));
  if (padding == Padding::kValid) {
    d.pad = 0;
    d.oh = d.h - d.k + 1;
    d.ow = d.w - d.k + 1;
    if (d.oh <= 0 || d.ow <= 0)
      throw ShapeError("conv2d input " + x.str() +
                       " too small for valid padding with k=" +
                       std::to_string(d.k));
  } else {
    if (d.k % 2 == 0) throw ShapeError("same padding requires odd kernels");
    d.pad = (d.k - 1) / 2;
    d.oh = d.h;
    d.ow = d.w;
  }
  return d;
}

// Lowers one batch item to a (inC*k*k, oh*ow) patch matrix.
void im2col(const double* x, const ConvDims& d, int n, RowMat& col) {
  col.resize(size_t(d.inC) * d.k * d.k, size_t(d.oh) * d.ow);
  const size_t planeIn = size_t(d.h) * d.w;
  const double* base = x + size_t(n) * d.inC * planeIn;
  for (int c = 0; c < d.inC; ++c) {
    for (int ky = 0; ky < d.k; ++ky) {
      for (int kx = 0; kx < d.k; ++kx) {
        size_t r = (size_t(c) * d.k + ky) * d.k + kx;
        double* dst = col.data() + r * size_t(d.oh) * d.ow;
        for (int oy = 0; oy < d.oh; ++oy) {
          int iy = oy + ky - d.pad;
          double* drow = dst + size_t(oy) * d.ow;
          if (iy < 0 || iy >= d.h) {
            std::memset(drow, 0, sizeof(double) * size_t(d.ow));
            continue;
          }
          const double* srow = base + size_t(c) * planeIn + size_t(iy) * d.w;
          int x0 = d.pad - kx;              // first ox with ix >= 0
          int x1 = d.w - 1 + d.pad - kx;    // last ox with ix <= w-1
          int lo = std::max(0, x0);
          int hi = std::min(d.ow - 1, x1);
          for (int ox = 0; ox < lo; ++ox) drow[ox] = 0.0;
          if (hi >= lo)
            std::memcpy(drow + lo, srow + (lo + kx - d.pad),
                        sizeof(double) * size_t(hi - lo + 1));
          for (int ox = hi + 1; ox < d.ow; ++ox) drow[ox] = 0.0;
        }
      }
    }
  }
}

// Accumulates a (inC*k*k, oh*ow) patch-gradient matrix back into the
// input gradient of one batch item.
void col2imAdd(const RowMat& col, const ConvDims& d, int n, double* gx) {
  const size_t planeIn = size_t(d.h) * d.w;
  double* base = gx + size_t(n) * d.inC * planeIn;
  for (int c = 0; c < d.inC; ++c) {
    for (int ky = 0; ky < d.k; ++ky) {
      for (int kx = 0; kx < d.k; ++kx) {
        size_t r = (size_t(c) * d.k + ky) * d.k + kx;
        const double* src = col.data() + r * size_t(d.oh) * d.ow;
        for (int oy = 0; oy < d.oh; ++oy) {
          int iy = oy + ky - d.pad;
          if (iy < 0 || iy >= d.h) continue;
          const double* srow = src + size_t(oy) * d.ow;
          double* drow = base + size_t(c) * planeIn + size_t(iy) * d.w;
          int lo = std::max(0, d.pad - kx);
          int hi = std::min(d.ow - 1, d.w - 1 + d.pad - kx);
          for (int ox = lo; ox <= hi; ++ox)
            drow[ox + kx - d.pad] += srow[ox];
        }
      }
    }
  }
}

void requireSameShape(const Var& a, const Var& b, const char* what) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(what) + ": shape mismatch " +
                     a.shape().str() + " vs " + b.shape().str());
}

bool tracked(const std::shared_ptr<detail::Node>& n) { return n->tracked(); }

}  // namespace

Var conv2d(const Var& x, const Var& weight, const Var& bias, Padding padding) {
  ConvDims d = convDims(x.shape(), weight.shape(), padding);
  if (bias.shape() != Shape{d.outC})
    throw ShapeError("conv2d bias must have one entry per output channel");

  Tensor out(Shape{d.n, d.outC, d.oh, d.ow});
  {
    RowMat col;
    Eigen::Map<const RowMat> wmat(weight.value().data.data(), d.outC,
                                  size_t(d.inC) * d.k * d.k);
    const size_t planeOut = size_t(d.oh) * d.ow;
    for (int n = 0; n < d.n; ++n) {
      im2col(x.value().data.data(), d, n, col);
      Eigen::Map<RowMat> omat(out.data.data() + size_t(n) * d.outC * planeOut,
                              d.outC, planeOut);
      omat.noalias() = wmat * col;
      for (int o = 0; o < d.outC; ++o)
        omat.row(o).array() += bias.value().data[size_t(o)];
    }
  }

  return detail::makeOp(
      std::move(out), {x, weight, bias}, [d](detail::Node& node) {
        auto& xn = node.parents[0];
        auto& wn = node.parents[1];
        auto& bn = node.parents[2];
        const size_t planeOut = size_t(d.oh) * d.ow;
        Eigen::Map<const RowMat> wmat(wn->value.data.data(), d.outC,
                                      size_t(d.inC) * d.k * d.k);
        RowMat col, colGrad;
        for (int n = 0; n < d.n; ++n) {
          Eigen::Map<const RowMat> gout(
              node.grad.data.data() + size_t(n) * d.outC * planeOut, d.outC,
              planeOut);
          if (tracked(wn) || tracked(xn))
            im2col(xn->value.data.data(), d, n, col);
          if (tracked(wn)) {
            Eigen::Map<RowMat> gw(wn->ensureGrad().data.data(), d.outC,
                                  size_t(d.inC) * d.k * d.k);
            gw.noalias() += gout * col.transpose();
          }
          if (tracked(bn)) {
            // Serial accumulation; Eigen's redux orders the sum by buffer
            // alignment, which breaks bit-reproducibility across runs.
            double* gb = bn->ensureGrad().data.data();
            const double* g =
                node.grad.data.data() + size_t(n) * d.outC * planeOut;
            for (int o = 0; o < d.outC; ++o) {
              double s = 0;
              const double* row = g + size_t(o) * planeOut;
              for (size_t i = 0; i < planeOut; ++i) s += row[i];
              gb[o] += s;
            }
          }
          if (tracked(xn)) {
            colGrad.noalias() = wmat.transpose() * gout;
            col2imAdd(colGrad, d, n, xn->ensureGrad().data.data());
          }
        }
      });
}

Var selu(const Var& x) {
  Tensor out(x.shape());
  const auto& in = x.value().data;
  for (size_t i = 0; i < in.size(); ++i) {
    double v = in[i];
    out.data[i] =
        v > 0 ? kSeluLambda * v : kSeluLambda * kSeluAlpha * (std::exp(v) - 1.0);
  }
  return detail::makeOp(std::move(out), {x}, [](detail::Node& node) {
    auto& xn = node.parents[0];
    if (!tracked(xn)) return;
    Tensor& gx = xn->ensureGrad();
    const auto& in = xn->value.data;
    for (size_t i = 0; i < in.size(); ++i) {
      double slope = in[i] > 0
                         ? kSeluLambda
                         : node.value.data[i] + kSeluLambda * kSeluAlpha;
      gx.data[i] += node.grad.data[i] * slope;
    }
  });
}

namespace {

// Decomposes shape into (outer, axis length, inner) strides around `axis`.
struct AxisSplit {
  size_t outer, n, inner;
};

AxisSplit splitAxis(const Shape& s, int axis) {
  PSW_CHECK(axis >= 0 && axis < s.rank(), "softmax axis out of range");
  AxisSplit a{1, size_t(s[axis]), 1};
  for (int i = 0; i < axis; ++i) a.outer *= size_t(s[i]);
  for (int i = axis + 1; i < s.rank(); ++i) a.inner *= size_t(s[i]);
  return a;
}

}  // namespace

Var softmax(const Var& x, int axis) {
  AxisSplit a = splitAxis(x.shape(), axis);
  Tensor out(x.shape());
  const auto& in = x.value().data;
  for (size_t o = 0; o < a.outer; ++o) {
    for (size_t i = 0; i < a.inner; ++i) {
      size_t base = o * a.n * a.inner + i;
      double mx = in[base];
      for (size_t j = 1; j < a.n; ++j)
        mx = std::max(mx, in[base + j * a.inner]);
      double sum = 0;
      for (size_t j = 0; j < a.n; ++j) {
        double e = std::exp(in[base + j * a.inner] - mx);
        out.data[base + j * a.inner] = e;
        sum += e;
      }
      for (size_t j = 0; j < a.n; ++j) out.data[base + j * a.inner] /= sum;
    }
  }
  return detail::makeOp(std::move(out), {x}, [a](detail::Node& node) {
    auto& xn = node.parents[0];
    if (!tracked(xn)) return;
    Tensor& gx = xn->ensureGrad();
    const auto& y = node.value.data;
    const auto& g = node.grad.data;
    for (size_t o = 0; o < a.outer; ++o) {
      for (size_t i = 0; i < a.inner; ++i) {
        size_t base = o * a.n * a.inner + i;
        double dot = 0;
        for (size_t j = 0; j < a.n; ++j)
          dot += g[base + j * a.inner] * y[base + j * a.inner];
        for (size_t j = 0; j < a.n; ++j) {
          size_t idx = base + j * a.inner;
          gx.data[idx] += y[idx] * (g[idx] - dot);
        }
      }
    }
  });
}

Var add(const Var& a, const Var& b) {
  requireSameShape(a, b, "add");
  Tensor out(a.shape());
  for (size_t i = 0; i < out.numel(); ++i)
    out.data[i] = a.value().data[i] + b.value().data[i];
  return detail::makeOp(std::move(out), {a, b}, [](detail::Node& node) {
    for (int p = 0; p < 2; ++p) {
      auto& pn = node.parents[size_t(p)];
      if (!tracked(pn)) continue;
      Tensor& g = pn->ensureGrad();
      for (size_t i = 0; i < g.numel(); ++i) g.data[i] += node.grad.data[i];
    }
  });
}

Var sub(const Var& a, const Var& b) {
  requireSameShape(a, b, "sub");
  Tensor out(a.shape());
  for (size_t i = 0; i < out.numel(); ++i)
    out.data[i] = a.value().data[i] - b.value().data[i];
  return detail::makeOp(std::move(out), {a, b}, [](detail::Node& node) {
    auto& an = node.parents[0];
    auto& bn = node.parents[1];
    if (tracked(an)) {
      Tensor& g = an->ensureGrad();
      for (size_t i = 0; i < g.numel(); ++i) g.data[i] += node.grad.data[i];
    }
    if (tracked(bn)) {
      Tensor& g = bn->ensureGrad();
      for (size_t i = 0; i < g.numel(); ++i) g.data[i] -= node.grad.data[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  requireSameShape(a, b, "mul");
  Tensor out(a.shape());
  for (size_t i = 0; i < out.numel(); ++i)
    out.data[i] = a.value().data[i] * b.value().data[i];
  return detail::makeOp(std::move(out), {a, b}, [](detail::Node& node) {
    auto& an = node.parents[0];
    auto& bn = node.parents[1];
    if (tracked(an)) {
      Tensor& g = an->ensureGrad();
      for (size_t i = 0; i < g.numel(); ++i)
        g.data[i] += node.grad.data[i] * bn->value.data[i];
    }
    if (tracked(bn)) {
      Tensor& g = bn->ensureGrad();
      for (size_t i = 0; i < g.numel(); ++i)
        g.data[i] += node.grad.data[i] * an->value.data[i];
    }
  });
}

Var scale(const Var& x, double s) {
  Tensor out(x.shape());
  for (size_t i = 0; i < out.numel(); ++i) out.data[i] = x.value().data[i] * s;
  return detail::makeOp(std::move(out), {x}, [s](detail::Node& node) {
    auto& xn = node.parents[0];
    if (!tracked(xn)) return;
    Tensor& g = xn->ensureGrad();
    for (size_t i = 0; i < g.numel(); ++i) g.data[i] += node.grad.data[i] * s;
  });
}

Var sumAll(const Var& x) {
  double s = 0;
  for (double v : x.value().data) s += v;
  return detail::makeOp(Tensor::scalar(s), {x}, [](detail::Node& node) {
    auto& xn = node.parents[0];
    if (!tracked(xn)) return;
    Tensor& g = xn->ensureGrad();
    double gv = node.grad.data[0];
    for (size_t i = 0; i < g.numel(); ++i) g.data[i] += gv;
  });
}

Var l1Loss(const Var& pred, const Var& target) {
  requireSameShape(pred, target, "l1Loss");
  double s = 0;
  for (size_t i = 0; i < pred.value().numel(); ++i)
    s += std::fabs(pred.value().data[i] - target.value().data[i]);
  return detail::makeOp(Tensor::scalar(s), {pred, target},
                        [](detail::Node& node) {
                          auto& pn = node.parents[0];
                          auto& tn = node.parents[1];
                          double gv = node.grad.data[0];
                          auto sign = [](double d) {
                            return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
                          };
                          if (tracked(pn)) {
                            Tensor& g = pn->ensureGrad();
                            for (size_t i = 0; i < g.numel(); ++i)
                              g.data[i] += gv * sign(pn->value.data[i] -
                                                     tn->value.data[i]);
                          }
                          if (tracked(tn)) {
                            Tensor& g = tn->ensureGrad();
                            for (size_t i = 0; i < g.numel(); ++i)
                              g.data[i] -= gv * sign(pn->value.data[i] -
                                                     tn->value.data[i]);
                          }
                        });
}

Var concatChannels(const std::vector<Var>& xs) {
  PSW_CHECK(!xs.empty(), "concatChannels needs at least one input");
  const Shape& s0 = xs[0].shape();
  PSW_CHECK(s0.rank() == 4, "concatChannels expects rank-4 inputs");
  int totalC = 0;
  for (const Var& x : xs) {
    const Shape& s = x.shape();
    if (s.rank() != 4 || s[0] != s0[0] || s[2] != s0[2] || s[3] != s0[3])
      throw ShapeError("concatChannels: incompatible input shapes");
    totalC += s[1];
  }
  int n = s0[0], h = s0[2], w = s0[3];
  size_t plane = size_t(h) * w;
  Tensor out(Shape{n, totalC, h, w});
  for (int b = 0; b < n; ++b) {
    size_t dstC = 0;
    for (const Var& x : xs) {
      int c = x.shape()[1];
      std::memcpy(out.data.data() + (size_t(b) * totalC + dstC) * plane,
                  x.value().data.data() + size_t(b) * c * plane,
                  sizeof(double) * size_t(c) * plane);
      dstC += size_t(c);
    }
  }
  std::vector<Var> parents = xs;
  return detail::makeOp(std::move(out), std::move(parents),
                        [n, totalC, plane](detail::Node& node) {
                          size_t srcC = 0;
                          for (auto& pn : node.parents) {
                            int c = pn->value.shape[1];
                            if (tracked(pn)) {
                              Tensor& g = pn->ensureGrad();
                              for (int b = 0; b < n; ++b) {
                                const double* src =
                                    node.grad.data.data() +
                                    (size_t(b) * totalC + srcC) * plane;
                                double* dst =
                                    g.data.data() + size_t(b) * c * plane;
                                for (size_t i = 0; i < size_t(c) * plane; ++i)
                                  dst[i] += src[i];
                              }
                            }
                            srcC += size_t(c);
                          }
                        });
}

Var sliceChannels(const Var& x, int c0, int c1) {
  const Shape& s = x.shape();
  PSW_CHECK(s.rank() == 4, "sliceChannels expects rank-4 input");
  PSW_CHECK(0 <= c0 && c0 < c1 && c1 <= s[1], "sliceChannels range");
  int n = s[0], c = s[1], h = s[2], w = s[3];
  size_t plane = size_t(h) * w;
  Tensor out(Shape{n, c1 - c0, h, w});
  for (int b = 0; b < n; ++b)
    std::memcpy(out.data.data() + size_t(b) * (c1 - c0) * plane,
                x.value().data.data() + (size_t(b) * c + c0) * plane,
                sizeof(double) * size_t(c1 - c0) * plane);
  return detail::makeOp(std::move(out), {x},
                        [c0, c1, c, plane](detail::Node& node) {
                          auto& xn = node.parents[0];
                          if (!tracked(xn)) return;
                          Tensor& g = xn->ensureGrad();
                          int n = node.value.shape[0];
                          for (int b = 0; b < n; ++b) {
                            const double* src = node.grad.data.data() +
                                                size_t(b) * (c1 - c0) * plane;
                            double* dst =
                                g.data.data() + (size_t(b) * c + c0) * plane;
                            for (size_t i = 0; i < size_t(c1 - c0) * plane; ++i)
                              dst[i] += src[i];
                          }
                        });
}

Var reshape(const Var& x, Shape shape) {
  PSW_CHECK(shape.numel() == x.value().numel(), "reshape must preserve size");
  Tensor out(std::move(shape));
  out.data = x.value().data;
  return detail::makeOp(std::move(out), {x}, [](detail::Node& node) {
    auto& xn = node.parents[0];
    if (!tracked(xn)) return;
    Tensor& g = xn->ensureGrad();
    for (size_t i = 0; i < g.numel(); ++i) g.data[i] += node.grad.data[i];
  });
}

Var mulPlane(const Var& x, const Var& w) {
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  if (xs.rank() != 4 || ws.rank() != 4 || ws[1] != 1 || ws[0] != xs[0] ||
      ws[2] != xs[2] || ws[3] != xs[3])
    throw ShapeError("mulPlane: weight must be (N,1,H,W) matching x");
  int n = xs[0], c = xs[1];
  size_t plane = size_t(xs[2]) * xs[3];
  Tensor out(xs);
  for (int b = 0; b < n; ++b) {
    const double* wv = w.value().data.data() + size_t(b) * plane;
    for (int ch = 0; ch < c; ++ch) {
      const double* xv = x.value().data.data() + (size_t(b) * c + ch) * plane;
      double* ov = out.data.data() + (size_t(b) * c + ch) * plane;
      for (size_t i = 0; i < plane; ++i) ov[i] = xv[i] * wv[i];
    }
  }
  return detail::makeOp(std::move(out), {x, w},
                        [n, c, plane](detail::Node& node) {
                          auto& xn = node.parents[0];
                          auto& wn = node.parents[1];
                          for (int b = 0; b < n; ++b) {
                            const double* wv =
                                wn->value.data.data() + size_t(b) * plane;
                            if (tracked(xn)) {
                              Tensor& gx = xn->ensureGrad();
                              for (int ch = 0; ch < c; ++ch) {
                                const double* g = node.grad.data.data() +
                                                  (size_t(b) * c + ch) * plane;
                                double* dst = gx.data.data() +
                                              (size_t(b) * c + ch) * plane;
                                for (size_t i = 0; i < plane; ++i)
                                  dst[i] += g[i] * wv[i];
                              }
                            }
                            if (tracked(wn)) {
                              Tensor& gw = wn->ensureGrad();
                              double* dst = gw.data.data() + size_t(b) * plane;
                              for (int ch = 0; ch < c; ++ch) {
                                const double* g = node.grad.data.data() +
                                                  (size_t(b) * c + ch) * plane;
                                const double* xv = xn->value.data.data() +
                                                   (size_t(b) * c + ch) * plane;
                                for (size_t i = 0; i < plane; ++i)
                                  dst[i] += g[i] * xv[i];
                              }
                            }
                          }
                        });
}

Var pdfBlend(const Var& pdf, Tensor volume) {
  const Shape& ps = pdf.shape();
  const Shape& vs = volume.shape;
  if (ps.rank() != 4 || ps[0] != 1 || vs.rank() != 4 || vs[0] != ps[1] ||
      vs[2] != ps[2] || vs[3] != ps[3])
    throw ShapeError("pdfBlend: pdf (1,D,H,W) must match volume (D,C,H,W)");
  int d = vs[0], c = vs[1];
  size_t plane = size_t(vs[2]) * vs[3];
  Tensor out(Shape{1, c, vs[2], vs[3]});
  for (int k = 0; k < d; ++k) {
    const double* pv = pdf.value().data.data() + size_t(k) * plane;
    for (int ch = 0; ch < c; ++ch) {
      const double* vv = volume.data.data() + (size_t(k) * c + ch) * plane;
      double* ov = out.data.data() + size_t(ch) * plane;
      for (size_t i = 0; i < plane; ++i) ov[i] += vv[i] * pv[i];
    }
  }
  auto vol = std::make_shared<Tensor>(std::move(volume));
  return detail::makeOp(std::move(out), {pdf},
                        [vol, d, c, plane](detail::Node& node) {
                          auto& pn = node.parents[0];
                          if (!tracked(pn)) return;
                          Tensor& gp = pn->ensureGrad();
                          for (int k = 0; k < d; ++k) {
                            double* dst = gp.data.data() + size_t(k) * plane;
                            for (int ch = 0; ch < c; ++ch) {
                              const double* vv = vol->data.data() +
                                                 (size_t(k) * c + ch) * plane;
                              const double* g =
                                  node.grad.data.data() + size_t(ch) * plane;
                              for (size_t i = 0; i < plane; ++i)
                                dst[i] += g[i] * vv[i];
                            }
                          }
                        });
}

Var fusePairs(const std::vector<Var>& estimates,
              const std::vector<Var>& logits) {
  if (estimates.empty()) throw ShapeError("fusePairs: empty estimate list");
  PSW_CHECK(estimates.size() == logits.size(),
            "fusePairs: one logit map per estimate");
  const Shape& es = estimates[0].shape();
  PSW_CHECK(es.rank() == 4 && es[0] == 1, "fusePairs expects (1,C,H,W)");
  int c = es[1];
  size_t plane = size_t(es[2]) * es[3];
  const size_t np = estimates.size();
  for (size_t i = 0; i < np; ++i) {
    if (estimates[i].shape() != es)
      throw ShapeError("fusePairs: estimate shape mismatch");
    if (logits[i].shape() != Shape{1, 1, es[2], es[3]})
      throw ShapeError("fusePairs: logit shape mismatch");
  }

  // Per-pixel softmax over the pair axis.
  Tensor weights(Shape{int(np), es[2], es[3]});
  for (size_t i = 0; i < plane; ++i) {
    double mx = logits[0].value().data[i];
    for (size_t p = 1; p < np; ++p)
      mx = std::max(mx, logits[p].value().data[i]);
    double sum = 0;
    for (size_t p = 0; p < np; ++p) {
      double e = std::exp(logits[p].value().data[i] - mx);
      weights.data[p * plane + i] = e;
      sum += e;
    }
    for (size_t p = 0; p < np; ++p) weights.data[p * plane + i] /= sum;
  }

  Tensor out(es);
  for (size_t p = 0; p < np; ++p) {
    const double* wv = weights.data.data() + p * plane;
    for (int ch = 0; ch < c; ++ch) {
      const double* ev = estimates[p].value().data.data() + size_t(ch) * plane;
      double* ov = out.data.data() + size_t(ch) * plane;
      for (size_t i = 0; i < plane; ++i) ov[i] += ev[i] * wv[i];
    }
  }

  std::vector<Var> parents;
  parents.reserve(np * 2);
  for (const Var& e : estimates) parents.push_back(e);
  for (const Var& l : logits) parents.push_back(l);
  auto w = std::make_shared<Tensor>(std::move(weights));
  return detail::makeOp(
      std::move(out), std::move(parents),
      [w, np, c, plane](detail::Node& node) {
        // dE_p = g * O_p ; dl_p = O_p * (s_p - sum_q O_q s_q) with
        // s_p = sum_c g_c * E_p,c per pixel.
        std::vector<double> s(np * plane, 0.0);
        for (size_t p = 0; p < np; ++p) {
          auto& en = node.parents[p];
          for (int ch = 0; ch < c; ++ch) {
            const double* g = node.grad.data.data() + size_t(ch) * plane;
            const double* ev = en->value.data.data() + size_t(ch) * plane;
            double* sp = s.data() + p * plane;
            for (size_t i = 0; i < plane; ++i) sp[i] += g[i] * ev[i];
          }
          if (tracked(en)) {
            Tensor& ge = en->ensureGrad();
            const double* wv = w->data.data() + p * plane;
            for (int ch = 0; ch < c; ++ch) {
              const double* g = node.grad.data.data() + size_t(ch) * plane;
              double* dst = ge.data.data() + size_t(ch) * plane;
              for (size_t i = 0; i < plane; ++i) dst[i] += g[i] * wv[i];
            }
          }
        }
        for (size_t i = 0; i < plane; ++i) {
          double mean = 0;
          for (size_t p = 0; p < np; ++p)
            mean += w->data[p * plane + i] * s[p * plane + i];
          for (size_t p = 0; p < np; ++p) {
            auto& ln = node.parents[np + p];
            if (!tracked(ln)) continue;
            ln->ensureGrad().data[i] +=
                w->data[p * plane + i] * (s[p * plane + i] - mean);
          }
        }
      });
}

ConvLayer ConvLayer::init(int inC, int outC, int k, Padding padding,
                          bool seluAfter, Rng& rng, const std::string& name) {
  PSW_CHECK(inC > 0 && outC > 0 && k > 0, "ConvLayer: positive dimensions");
  Tensor w(Shape{outC, inC, k, k});
  double std = 1.0 / std::sqrt(double(inC) * k * k);
  for (double& v : w.data) v = rng.normal() * std;
  ConvLayer layer;
  layer.weight = Var::parameter(std::move(w), name + ".weight");
  layer.bias = Var::parameter(Tensor(Shape{outC}, 0.0), name + ".bias");
  layer.padding = padding;
  layer.seluAfter = seluAfter;
  return layer;
}

Var ConvLayer::forward(const Var& x) const {
  Var y = conv2d(x, weight, bias, padding);
  return seluAfter ? selu(y) : y;
}

}  // namespace psw::ad
