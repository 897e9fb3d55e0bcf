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

#include "psw/ad/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <unordered_map>

namespace psw::ad {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'W', 'T'};
constexpr uint32_t kVersion = 1;

void putU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void putU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void putF64(std::string& out, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  putU64(out, bits);
}

class Reader {
 public:
  Reader(std::string bytes, std::string path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  size_t offset() const { return off_; }
  bool atEnd() const { return off_ == bytes_.size(); }

  uint32_t u32() {
    need(4, "u32");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= uint32_t(uint8_t(bytes_[off_ + i])) << (8 * i);
    off_ += 4;
    return v;
  }

  uint64_t u64() {
    need(8, "u64");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= uint64_t(uint8_t(bytes_[off_ + i])) << (8 * i);
    off_ += 8;
    return v;
  }

  double f64() {
    uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }

  std::string str(size_t n) {
    need(n, "string");
    std::string s = bytes_.substr(off_, n);
    off_ += n;
    return s;
  }

 private:
  void need(size_t n, const char* what) {
    if (off_ + n > bytes_.size())
      throw DataError("checkpoint '" + path_ + "': truncated " + what +
                      " at offset " + std::to_string(off_));
  }
  std::string bytes_;
  std::string path_;
  size_t off_ = 0;
};

}  // namespace

void saveCheckpoint(const std::string& path, const std::vector<Var>& params) {
  std::string out;
  out.append(kMagic, 4);
  putU32(out, kVersion);
  for (const Var& p : params) {
    const Tensor& t = p.value();
    putU32(out, uint32_t(p.name().size()));
    out.append(p.name());
    putU32(out, uint32_t(t.shape.rank()));
    for (int d : t.shape.dims) putU64(out, uint64_t(d));
    for (double v : t.data) putF64(out, v);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open checkpoint for writing: " + path);
  f.write(out.data(), std::streamsize(out.size()));
  if (!f) throw DataError("failed writing checkpoint: " + path);
}

std::vector<std::pair<std::string, Tensor>> loadCheckpoint(
    const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path);

  if (r.str(4) != std::string(kMagic, 4))
    throw DataError("checkpoint '" + path + "': bad magic at offset 0");
  uint32_t version = r.u32();
  if (version != kVersion)
    throw DataError("checkpoint '" + path + "': unsupported version " +
                    std::to_string(version));

  std::vector<std::pair<std::string, Tensor>> tensors;
  while (!r.atEnd()) {
    uint32_t nameLen = r.u32();
    std::string name = r.str(nameLen);
    uint32_t rank = r.u32();
    if (rank == 0 || rank > 4)
      throw DataError("checkpoint '" + path + "': bad rank " +
                      std::to_string(rank) + " at offset " +
                      std::to_string(r.offset()));
    Shape shape;
    for (uint32_t i = 0; i < rank; ++i)
      shape.dims.push_back(int(r.u64()));
    Tensor t(shape);
    for (size_t i = 0; i < t.numel(); ++i) t.data[i] = r.f64();
    tensors.emplace_back(std::move(name), std::move(t));
  }
  return tensors;
}

std::vector<std::string> assignFromCheckpoint(
    std::vector<Var>& params,
    const std::vector<std::pair<std::string, Tensor>>& checkpoint,
    bool requireAll) {
  std::unordered_map<std::string, const Tensor*> byName;
  for (const auto& [name, tensor] : checkpoint) byName[name] = &tensor;

  std::vector<std::string> missing;
  for (Var& p : params) {
    auto it = byName.find(p.name());
    if (it == byName.end()) {
      if (requireAll)
        throw DataError("checkpoint is missing parameter '" + p.name() + "'");
      missing.push_back(p.name());
      continue;
    }
    if (it->second->shape != p.shape()) {
      if (requireAll)
        throw DataError("checkpoint parameter '" + p.name() +
                        "' has shape " + it->second->shape.str() +
                        ", model expects " + p.shape().str());
      missing.push_back(p.name());
      continue;
    }
    p.mutableValue().data = it->second->data;
  }
  return missing;
}

}  // namespace psw::ad
