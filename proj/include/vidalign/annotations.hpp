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

#ifndef VIDALIGN_ANNOTATIONS_HPP_
#define VIDALIGN_ANNOTATIONS_HPP_

#include <string>
#include <vector>

#include "vidalign/types.hpp"

namespace vidalign {

// Declared raw score range of a dataset; scores are affinely mapped to
// [0,1] at load time and the mapping is invertible.
struct ScaleRange {
  double lo = 0.0;
  double hi = 1.0;

  double normalize(double raw) const { return (raw - lo) / (hi - lo); }
  double denormalize(double unit) const { return lo + unit * (hi - lo); }
};

// One supervision item. `kind` selects which payload fields are live;
// all scores are stored normalized to [0,1].
struct AnnotationRecord {
  std::string id;
  TaskKind kind = TaskKind::kImageScore;

  SyntheticVideo video;    // single-video kinds; side A for pairs
  SyntheticVideo video_b;  // pairs only

  double mos = 0.0;                // image_score / natural_video_score
  std::vector<double> mos_multi;   // video_multidim, M = 3
  PairLabel pair_label = PairLabel::kA;
  std::string question_id;         // vqa
  bool vqa_answer_yes = false;     // vqa

  ScaleRange scale;
};

}  // namespace vidalign

#endif  // VIDALIGN_ANNOTATIONS_HPP_
