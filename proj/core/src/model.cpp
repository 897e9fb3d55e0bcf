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

#include "psw/net/model.hpp"

#include <json.hpp>

#include <fstream>

#include "psw/ad/checkpoint.hpp"

namespace psw::net {

using nlohmann::json;

ModelConfig ModelConfig::paper(int depthLevels) {
  if (depthLevels != 16 && depthLevels != 64)
    throw ConfigError("paper preset defines 16- and 64-level variants only");
  ModelConfig c;
  c.depthLevels = depthLevels;
  c.preset = "paper";
  c.extractor = {{13, 8},  {13, 8},  {13, 16}, {13, 16}, {9, 32},
                 {9, 32},  {5, 64},  {5, 64},  {5, 128}, {5, 128}};
  c.correlator = {{3, 128}, {3, 128}, {3, 64}, {3, 64},
                  {3, 32},  {3, 32},  {3, 16}, {3, 16}};
  if (depthLevels == 64)
    c.head = {{3, 512}, {3, 256}, {3, 128}, {3, 67}};
  else
    c.head = {{3, 128}, {3, 64}, {3, 32}, {3, 19}};
  c.validate();
  return c;
}

ModelConfig ModelConfig::compact(int depthLevels) {
  if (depthLevels < 2) throw ConfigError("need at least two depth levels");
  ModelConfig c;
  c.depthLevels = depthLevels;
  c.preset = "compact";
  c.extractor = {{3, 8}, {3, 16}};
  c.correlator = {{3, 16}, {3, 8}};
  c.head = {{3, 48}, {3, depthLevels + 3}};
  c.validate();
  return c;
}

int ModelConfig::extractorShrink() const {
  int s = 0;
  for (const ConvSpec& l : extractor) s += l.kernel - 1;
  return s;
}

void ModelConfig::validate() const {
  if (depthLevels < 2) throw ConfigError("model needs at least 2 depth levels");
  if (extractor.empty() || correlator.empty() || head.empty())
    throw ConfigError("model requires all three sub-networks");
  for (const ConvSpec& l : correlator)
    if (l.kernel % 2 == 0)
      throw ConfigError("correlator kernels must be odd (same padding)");
  for (const ConvSpec& l : head)
    if (l.kernel % 2 == 0)
      throw ConfigError("head kernels must be odd (same padding)");
  if (head.back().outChannels != depthLevels + 3)
    throw ConfigError(
        "head must emit depthLevels + 3 channels (pdf + 2 confidence + "
        "occlusion); got " +
        std::to_string(head.back().outChannels));
  if (extractorShrink() % 2 != 0)
    throw ConfigError("extractor shrink must be even");
}

std::string ModelConfig::toJson() const {
  auto table = [](const std::vector<ConvSpec>& layers) {
    json t = json::array();
    for (const ConvSpec& l : layers)
      t.push_back({{"kernel", l.kernel}, {"channels", l.outChannels}});
    return t;
  };
  json j{{"depth_levels", depthLevels},
         {"preset", preset},
         {"extractor", table(extractor)},
         {"correlator", table(correlator)},
         {"head", table(head)}};
  return j.dump(2);
}

ModelConfig ModelConfig::fromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad model manifest: ") + e.what());
  }
  auto table = [&](const char* key) {
    std::vector<ConvSpec> layers;
    for (const auto& l : j.at(key))
      layers.push_back({l.at("kernel").get<int>(), l.at("channels").get<int>()});
    return layers;
  };
  ModelConfig c;
  try {
    c.depthLevels = j.at("depth_levels").get<int>();
    c.preset = j.value("preset", "custom");
    c.extractor = table("extractor");
    c.correlator = table("correlator");
    c.head = table("head");
  } catch (const json::exception& e) {
    throw DataError(std::string("bad model manifest: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

std::vector<ad::ConvLayer> buildStack(const std::vector<ConvSpec>& specs,
                                      int inChannels, ad::Padding padding,
                                      bool seluOnLast, const std::string& stem,
                                      Rng& rng,
                                      std::vector<ad::Var>& params) {
  std::vector<ad::ConvLayer> layers;
  int c = inChannels;
  for (size_t i = 0; i < specs.size(); ++i) {
    bool seluAfter = seluOnLast || i + 1 < specs.size();
    layers.push_back(ad::ConvLayer::init(c, specs[i].outChannels,
                                         specs[i].kernel, padding, seluAfter,
                                         rng, stem + "." + std::to_string(i)));
    params.push_back(layers.back().weight);
    params.push_back(layers.back().bias);
    c = specs[i].outChannels;
  }
  return layers;
}

}  // namespace

Model::Model(ModelConfig config, uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed ^ 0x70737774ULL);
  extractor_ = buildStack(config_.extractor, 3, ad::Padding::kValid, true,
                          "extractor", rng, params_);
  correlator_ =
      buildStack(config_.correlator, 2 * config_.featureChannels(),
                 ad::Padding::kSame, true, "correlator", rng, params_);
  head_ = buildStack(config_.head, config_.headInputChannels(),
                     ad::Padding::kSame, /*seluOnLast=*/false, "head", rng,
                     params_);
}

std::vector<ad::Var> Model::featureParams() const {
  std::vector<ad::Var> out;
  for (const auto& l : extractor_) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  for (const auto& l : correlator_) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  return out;
}

std::vector<ad::Var> Model::headParams() const {
  std::vector<ad::Var> out;
  for (const auto& l : head_) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  return out;
}

ad::Var Model::extractFeatures(const ad::Var& planes) const {
  if (planes.shape().rank() != 4 || planes.shape()[1] != 3)
    throw ShapeError("extractFeatures expects (N, 3, h, w), got " +
                     planes.shape().str());
  ad::Var x = planes;
  for (const auto& layer : extractor_) x = layer.forward(x);
  return x;
}

ad::Var Model::correlateFeatures(const ad::Var& fa, const ad::Var& fb) const {
  if (fa.shape() != fb.shape())
    throw ShapeError("correlateFeatures: feature shapes differ");
  ad::Var x = ad::concatChannels({fa, fb});
  for (const auto& layer : correlator_) x = layer.forward(x);
  return x;
}

DepthInference Model::inferDepth(const ad::Var& scores) const {
  const int d = config_.depthLevels;
  if (scores.shape().rank() != 4 || scores.shape()[0] != 1 ||
      scores.shape()[1] != config_.headInputChannels())
    throw ShapeError("inferDepth expects (1, " +
                     std::to_string(config_.headInputChannels()) +
                     ", h, w) for the " + std::to_string(d) +
                     "-level head, got " + scores.shape().str());
  ad::Var x = scores;
  for (const auto& layer : head_) x = layer.forward(x);

  DepthInference inf;
  inf.pdf = ad::softmax(ad::sliceChannels(x, 0, d), 1);
  inf.confidence = ad::softmax(ad::sliceChannels(x, d, d + 2), 1);
  inf.occlusionLogit = ad::sliceChannels(x, d + 2, d + 3);
  return inf;
}

DepthInference Model::forwardPair(const ad::Tensor& psvA,
                                  const ad::Tensor& psvB) const {
  const int d = config_.depthLevels;
  auto checkPsv = [&](const ad::Tensor& t, const char* which) {
    if (t.shape.rank() != 4 || t.shape[0] != d || t.shape[1] != 3)
      throw ShapeError(std::string("forwardPair: ") + which + " must be (" +
                       std::to_string(d) + ", 3, H, W), got " + t.shape.str());
  };
  checkPsv(psvA, "psvA");
  checkPsv(psvB, "psvB");

  ad::Var fa = extractFeatures(ad::Var::constant(psvA));
  ad::Var fb = extractFeatures(ad::Var::constant(psvB));
  ad::Var scores = correlateFeatures(fa, fb);
  const ad::Shape& s = scores.shape();
  ad::Var flat = ad::reshape(scores, ad::Shape{1, s[0] * s[1], s[2], s[3]});
  return inferDepth(flat);
}

void Model::save(const std::string& path, const std::string& phase) const {
  ad::saveCheckpoint(path, params_);
  json manifest = json::parse(config_.toJson());
  manifest["phase"] = phase;
  std::ofstream f(path + ".json", std::ios::trunc);
  if (!f) throw DataError("cannot write model manifest: " + path + ".json");
  f << manifest.dump(2) << '\n';
}

Model Model::load(const std::string& path) {
  std::ifstream f(path + ".json");
  if (!f) throw DataError("missing model manifest: " + path + ".json");
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  Model model(ModelConfig::fromJson(text), /*seed=*/0);
  auto ckpt = ad::loadCheckpoint(path);
  ad::assignFromCheckpoint(model.params_, ckpt, /*requireAll=*/true);
  return model;
}

void Model::loadFeatureModules(const std::string& phase1Path) {
  auto ckpt = ad::loadCheckpoint(phase1Path);
  std::vector<ad::Var> features = featureParams();
  ad::assignFromCheckpoint(features, ckpt, /*requireAll=*/true);
}

ad::Tensor packPlanes(const std::vector<Image>& planes) {
  PSW_CHECK(!planes.empty(), "packPlanes: empty plane list");
  int h = planes[0].height, w = planes[0].width;
  ad::Tensor t(ad::Shape{int(planes.size()), 3, h, w});
  size_t stride = size_t(3) * h * w;
  for (size_t i = 0; i < planes.size(); ++i) {
    PSW_CHECK(planes[i].width == w && planes[i].height == h,
              "packPlanes: inconsistent plane sizes");
    std::copy(planes[i].data.begin(), planes[i].data.end(),
              t.data.begin() + i * stride);
  }
  return t;
}

ad::Tensor psvToTensor(const PlaneSweepVolume& psv) {
  return packPlanes(psv.planes);
}

}  // namespace psw::net
