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

#ifndef VIDALIGN_DATA_HPP_
#define VIDALIGN_DATA_HPP_

#include <span>
#include <string>
#include <vector>

#include "vidalign/annotations.hpp"
#include "vidalign/rng.hpp"
#include "vidalign/types.hpp"

namespace vidalign {

// Line-delimited JSON dataset I/O. Scores are stored raw (on the declared
// scale) on disk and normalized to [0,1] at load time.
struct LoadReport {
  std::vector<AnnotationRecord> records;
  std::vector<std::string> line_errors;  // "line N: why"
};

// Throws when the file is missing or more than 10% of nonempty lines are
// malformed; individual bad lines are reported, not fatal.
LoadReport load_dataset(const std::string& path, TaskKind kind);
void save_dataset(const std::string& path,
                  std::span<const AnnotationRecord> records);

struct OracleRow {
  std::string id;
  std::vector<double> truth;  // quality, per-dimension qualities, or gap
};

void save_oracle(const std::string& path, std::span<const OracleRow> rows);
std::vector<OracleRow> load_oracle(const std::string& path);

// Per-annotator systematic distortion applied on the unit scale.
struct AnnotatorProfile {
  double offset = 0.0;
  double scale_mult = 1.0;
};

struct WorldConfig {
  int feat_dim = 8;
  int prompt_dim = 4;
  int frames = 8;

  int n_image = 700;
  int n_image_holdout = 200;
  int n_multidim = 300;
  int n_multidim_holdout = 60;
  int n_pairs = 200;
  int n_pairs_holdout = 60;
  int n_vqa = 100;
  int n_vqa_holdout = 40;

  double tie_margin = 0.08;      // unit-scale quality gap below which pairs tie
  double annotator_offset = 0.03;
  double annotator_scale_jitter = 0.05;
  double annotator_noise = 0.01;
  // Fraction of training VQA labels flipped by annotator mistakes; the
  // holdout split is curated and never flipped.
  double vqa_label_noise = 0.15;
  // Width of the uninformative mid-scale band that training-split
  // temporal-quality labels are drawn from (annotators cannot judge
  // temporal quality reliably); the holdout split is curated.
  double temporal_label_noise = 0.5;
  int n_annotators = 3;

  ScaleRange image_scale{1.0, 5.0};
  ScaleRange video_scale{0.0, 1.0};
};

// Hidden ground-truth map from features to quality. Only evaluation and
// acceptance paths may consult it; training sees annotations alone.
class SyntheticWorld {
 public:
  static SyntheticWorld create(const WorldConfig& cfg, std::uint64_t seed);

  const WorldConfig& config() const { return cfg_; }
  const std::vector<AnnotatorProfile>& annotators() const {
    return annotators_;
  }

  // Unit-scale qualities.
  double single_quality(const SyntheticVideo& v) const;
  std::vector<double> multi_quality(const SyntheticVideo& v) const;
  double latent_quality(std::span<const double> z) const;

  // Static video whose every frame is the latent; keeps latent_quality
  // consistent with single_quality(decode_latent).
  SyntheticVideo decode_latent(std::span<const double> z) const;

  // Random video; smooth ones drift linearly across frames, non-smooth
  // ones hold the same frames in a jumbled order (mean is unchanged, so
  // quality does not leak the motion flag).
  SyntheticVideo random_video(Rng& rng, bool smooth) const;
  SyntheticVideo random_image(Rng& rng) const;

  // Biased annotation of a unit-scale quality; clamped to [0,1].
  double annotate(double quality, int annotator, Rng& rng) const;

 private:
  WorldConfig cfg_;
  std::vector<double> w_single_;
  std::vector<std::vector<double>> w_multi_;
  std::vector<AnnotatorProfile> annotators_;
};

struct GeneratedData {
  // Each list holds train items first, then the holdout tail.
  std::vector<AnnotationRecord> image;
  std::vector<AnnotationRecord> multidim;
  std::vector<AnnotationRecord> pairs;
  std::vector<AnnotationRecord> vqa;
  std::vector<OracleRow> oracle;
};

GeneratedData gen_synthetic(const SyntheticWorld& world, Rng& rng);

// First-n / tail split helpers matching GeneratedData's layout.
std::span<const AnnotationRecord> train_split(
    std::span<const AnnotationRecord> all, int holdout);
std::span<const AnnotationRecord> holdout_split(
    std::span<const AnnotationRecord> all, int holdout);

}  // namespace vidalign

#endif  // VIDALIGN_DATA_HPP_
