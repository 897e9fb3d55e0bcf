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

#ifndef PSW_AD_CHECKPOINT_HPP
#define PSW_AD_CHECKPOINT_HPP

#include <string>
#include <utility>
#include <vector>

#include "psw/ad/graph.hpp"

namespace psw::ad {

/// Weight checkpoint, binary, little-endian throughout:
///   magic "PSWT", version u32, then per-tensor records of
///   (name length u32, name bytes, rank u32, dims u64[rank], values f64[]).
/// Round-trips bit-exactly.
void saveCheckpoint(const std::string& path,
                    const std::vector<Var>& params);

std::vector<std::pair<std::string, Tensor>> loadCheckpoint(
    const std::string& path);

/// Copies checkpoint tensors into matching parameters (by name). With
/// `requireAll`, every parameter must be found with an identical shape;
/// otherwise matching entries are copied and the names of parameters left
/// untouched are returned.
std::vector<std::string> assignFromCheckpoint(
    std::vector<Var>& params,
    const std::vector<std::pair<std::string, Tensor>>& checkpoint,
    bool requireAll);

}  // namespace psw::ad

#endif  // PSW_AD_CHECKPOINT_HPP
