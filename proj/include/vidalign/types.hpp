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

#ifndef VIDALIGN_TYPES_HPP_
#define VIDALIGN_TYPES_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace vidalign {

enum class TaskKind {
  kImageScore,
  kNaturalVideoScore,
  kVideoMultidim,
  kPairCompare,
  kVqa,
};

enum class Choice { kA, kB };
enum class YesNo { kYes, kNo };
enum class PairLabel { kA, kB, kTie };

std::string_view task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(std::string_view name);

inline bool is_single_video_task(TaskKind kind) {
  return kind != TaskKind::kPairCompare;
}

// Feature-space stand-in for a video: T_f frames of dimension d plus a
// prompt feature vector. Images are represented as two identical frames.
struct SyntheticVideo {
  std::vector<std::vector<double>> frames;
  std::vector<double> prompt_features;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int feat_dim() const {
    return frames.empty() ? 0 : static_cast<int>(frames.front().size());
  }
};

}  // namespace vidalign

#endif  // VIDALIGN_TYPES_HPP_
