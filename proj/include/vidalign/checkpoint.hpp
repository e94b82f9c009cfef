// Copyright 2026 The Vidalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VIDALIGN_CHECKPOINT_HPP_
#define VIDALIGN_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "vidalign/param_vector.hpp"

namespace vidalign {

// FNV-1a over bytes; used to fingerprint the resolved configuration so a
// checkpoint refuses to load under different settings.
std::uint64_t fnv1a_hash(std::string_view text);

// Binary layout (all integers and doubles little-endian):
//   magic "VALNCKP1" | version u32 | config_hash u64 | segment_count u32
//   per segment: name_len u32 | name bytes | rows u64 | cols u64
//   values f64[total]
void save_checkpoint(const std::string& path, const ParamVector& params,
                     std::uint64_t config_hash);

// Rebuilds the ParamVector from the segment table. Throws on bad magic,
// version, truncation, or a config hash mismatch.
ParamVector load_checkpoint(const std::string& path,
                            std::uint64_t expected_config_hash);

// Hash read without validating against an expectation (for `report`).
std::uint64_t peek_checkpoint_hash(const std::string& path);

}  // namespace vidalign

#endif  // VIDALIGN_CHECKPOINT_HPP_
