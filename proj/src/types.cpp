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

#include "vidalign/types.hpp"

#include <stdexcept>

namespace vidalign {

std::string_view task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kImageScore: return "image_score";
    case TaskKind::kNaturalVideoScore: return "natural_video_score";
    case TaskKind::kVideoMultidim: return "video_multidim";
    case TaskKind::kPairCompare: return "pair";
    case TaskKind::kVqa: return "vqa";
  }
  return "?";
}

TaskKind task_kind_from_name(std::string_view name) {
  if (name == "image_score") return TaskKind::kImageScore;
  if (name == "natural_video_score") return TaskKind::kNaturalVideoScore;
  if (name == "video_multidim") return TaskKind::kVideoMultidim;
  if (name == "pair") return TaskKind::kPairCompare;
  if (name == "vqa") return TaskKind::kVqa;
  throw std::invalid_argument("unknown task kind: " + std::string(name));
}

}  // namespace vidalign
