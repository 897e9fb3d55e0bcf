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

#include <benchmark/benchmark.h>

#include "psw/ad/ops.hpp"
#include "psw/geometry/psv.hpp"
#include "psw/net/model.hpp"

using namespace psw;

namespace {

ad::Tensor randomTensor(ad::Shape shape, uint64_t seed) {
  Rng rng(seed);
  ad::Tensor t(std::move(shape));
  for (double& v : t.data) v = rng.uniform(-1, 1);
  return t;
}

Image randomImage(int w, int h, uint64_t seed) {
  Rng rng(seed);
  Image img(w, h);
  for (double& v : img.data) v = rng.uniform();
  return img;
}

void BM_Conv2dForward(benchmark::State& state) {
  // Channel/kernel mix of the heaviest published extractor layer, at a
  // reduced spatial size.
  int hw = int(state.range(0));
  ad::NoGradGuard guard;
  ad::Var x = ad::Var::constant(randomTensor({1, 64, hw, hw}, 1));
  ad::Var w = ad::Var::constant(randomTensor({64, 64, 5, 5}, 2));
  ad::Var b = ad::Var::constant(ad::Tensor(ad::Shape{64}, 0.0));
  for (auto _ : state) {
    ad::Var y = ad::conv2d(x, w, b, ad::Padding::kValid);
    benchmark::DoNotOptimize(y.value().data.data());
  }
  double macs = double(hw - 4) * (hw - 4) * 64 * 64 * 25;
  state.SetItemsProcessed(int64_t(state.iterations() * macs));
}

void BM_Conv2dBackward(benchmark::State& state) {
  int hw = int(state.range(0));
  Rng rng(3);
  auto layer = ad::ConvLayer::init(32, 32, 3, ad::Padding::kSame, true, rng,
                                   "bench");
  ad::Tensor input = randomTensor({1, 32, hw, hw}, 4);
  for (auto _ : state) {
    ad::Var loss = ad::sumAll(layer.forward(ad::Var::constant(input)));
    ad::backward(loss);
    layer.weight.zeroGrad();
    layer.bias.zeroGrad();
    benchmark::DoNotOptimize(loss.value().data[0]);
  }
}

void BM_WarpImage(benchmark::State& state) {
  Image src = randomImage(160, 120, 5);
  Mat3 h = Mat3::identity();
  h(0, 2) = 3.25;
  h(2, 0) = 1e-4;
  for (auto _ : state) {
    WarpResult w = warpImage(src, h, 160, 120);
    benchmark::DoNotOptimize(w.image.data.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * 160 * 120);
}

void BM_BuildPsv(benchmark::State& state) {
  Image src = randomImage(112, 112, 6);
  Camera source = Camera::lookingForward(90, 90, 112, 112, {0.3, 0, 0});
  Camera virt = Camera::lookingForward(90, 90, 112, 112, {});
  DepthLevels levels =
      makeDepthLevels(2, 40, int(state.range(0)), DepthSpacing::kInverseDepth);
  for (auto _ : state) {
    PlaneSweepVolume psv = buildPSV(src, source, virt, levels);
    benchmark::DoNotOptimize(psv.planes.data());
  }
}

void BM_CompactPairForward(benchmark::State& state) {
  net::Model model(net::ModelConfig::compact(16), 7);
  int in = int(state.range(0));
  ad::Tensor psvA = randomTensor({16, 3, in, in}, 8);
  ad::Tensor psvB = randomTensor({16, 3, in, in}, 9);
  ad::NoGradGuard guard;
  for (auto _ : state) {
    net::DepthInference inf = model.forwardPair(psvA, psvB);
    benchmark::DoNotOptimize(inf.pdf.value().data.data());
  }
}

}  // namespace

BENCHMARK(BM_Conv2dForward)->Arg(36)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv2dBackward)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WarpImage)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildPsv)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompactPairForward)
    ->Arg(36)
    ->Arg(20)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
