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

#include "vidalign/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vidalign {

namespace {

using nlohmann::json;

json video_to_json(const SyntheticVideo& v) {
  json j;
  j["frames"] = v.frames;
  j["prompt"] = v.prompt_features;
  return j;
}

SyntheticVideo video_from_json(const json& j) {
  SyntheticVideo v;
  v.frames = j.at("frames").get<std::vector<std::vector<double>>>();
  v.prompt_features = j.at("prompt").get<std::vector<double>>();
  if (v.frames.size() < 2) {
    throw std::invalid_argument("video needs at least 2 frames");
  }
  const std::size_t d = v.frames.front().size();
  for (const auto& f : v.frames) {
    if (f.size() != d) {
      throw std::invalid_argument("ragged frame dimensions");
    }
  }
  return v;
}

std::string pair_label_name(PairLabel label) {
  switch (label) {
    case PairLabel::kA: return "a";
    case PairLabel::kB: return "b";
    case PairLabel::kTie: return "tie";
  }
  throw std::logic_error("unreachable");
}

PairLabel pair_label_from_name(const std::string& name) {
  if (name == "a") return PairLabel::kA;
  if (name == "b") return PairLabel::kB;
  if (name == "tie") return PairLabel::kTie;
  throw std::invalid_argument("unknown pair label: " + name);
}

json record_to_json(const AnnotationRecord& r) {
  json j;
  j["id"] = r.id;
  j["kind"] = std::string(task_kind_name(r.kind));
  j["video"] = video_to_json(r.video);
  j["scale"] = {{"lo", r.scale.lo}, {"hi", r.scale.hi}};
  switch (r.kind) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore:
      j["mos"] = r.scale.denormalize(r.mos);
      break;
    case TaskKind::kVideoMultidim: {
      std::vector<double> raw;
      for (double m : r.mos_multi) raw.push_back(r.scale.denormalize(m));
      j["mos_multi"] = raw;
      break;
    }
    case TaskKind::kPairCompare:
      j["video_b"] = video_to_json(r.video_b);
      j["label"] = pair_label_name(r.pair_label);
      break;
    case TaskKind::kVqa:
      j["question_id"] = r.question_id;
      j["answer"] = r.vqa_answer_yes ? "yes" : "no";
      break;
  }
  return j;
}

AnnotationRecord record_from_json(const json& j, TaskKind expected) {
  AnnotationRecord r;
  r.id = j.at("id").get<std::string>();
  r.kind = task_kind_from_name(j.at("kind").get<std::string>());
  if (r.kind != expected) {
    throw std::invalid_argument("record kind does not match the dataset kind");
  }
  r.video = video_from_json(j.at("video"));
  const json& sc = j.at("scale");
  r.scale.lo = sc.at("lo").get<double>();
  r.scale.hi = sc.at("hi").get<double>();
  if (!(r.scale.lo < r.scale.hi)) {
    throw std::invalid_argument("scale lo must be below hi");
  }

  const auto check_and_normalize = [&](double raw) {
    if (raw < r.scale.lo || raw > r.scale.hi) {
      throw std::invalid_argument("mos outside the declared scale");
    }
    return r.scale.normalize(raw);
  };

  switch (r.kind) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore:
      r.mos = check_and_normalize(j.at("mos").get<double>());
      break;
    case TaskKind::kVideoMultidim: {
      const auto raw = j.at("mos_multi").get<std::vector<double>>();
      if (raw.size() != 3) {
        throw std::invalid_argument("mos_multi must have 3 dimensions");
      }
      for (double m : raw) r.mos_multi.push_back(check_and_normalize(m));
      break;
    }
    case TaskKind::kPairCompare:
      r.video_b = video_from_json(j.at("video_b"));
      r.pair_label = pair_label_from_name(j.at("label").get<std::string>());
      break;
    case TaskKind::kVqa: {
      r.question_id = j.at("question_id").get<std::string>();
      const std::string a = j.at("answer").get<std::string>();
      if (a != "yes" && a != "no") {
        throw std::invalid_argument("vqa answer must be yes or no");
      }
      r.vqa_answer_yes = a == "yes";
      break;
    }
  }
  return r;
}

}  // namespace

LoadReport load_dataset(const std::string& path, TaskKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  LoadReport report;
  std::string line;
  int line_no = 0;
  int nonempty = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++nonempty;
    try {
      report.records.push_back(record_from_json(json::parse(line), kind));
    } catch (const std::exception& e) {
      report.line_errors.push_back("line " + std::to_string(line_no) + ": " +
                                   e.what());
    }
  }
  if (nonempty > 0 &&
      static_cast<double>(report.line_errors.size()) > 0.10 * nonempty) {
    throw std::runtime_error(path + ": more than 10% malformed lines (" +
                             std::to_string(report.line_errors.size()) +
                             " of " + std::to_string(nonempty) + ")");
  }
  return report;
}

void save_dataset(const std::string& path,
                  std::span<const AnnotationRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const AnnotationRecord& r : records) {
    out << record_to_json(r).dump() << "\n";
  }
}

void save_oracle(const std::string& path, std::span<const OracleRow> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write oracle file: " + path);
  for (const OracleRow& row : rows) {
    json j;
    j["id"] = row.id;
    j["truth"] = row.truth;
    out << j.dump() << "\n";
  }
}

std::vector<OracleRow> load_oracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open oracle file: " + path);
  std::vector<OracleRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    rows.push_back({j.at("id").get<std::string>(),
                    j.at("truth").get<std::vector<double>>()});
  }
  return rows;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double mean_dot(const SyntheticVideo& v, std::span<const double> w) {
  double acc = 0.0;
  for (const auto& frame : v.frames) {
    for (std::size_t k = 0; k < frame.size(); ++k) acc += frame[k] * w[k];
  }
  return acc / static_cast<double>(v.frames.size());
}

}  // namespace

SyntheticWorld SyntheticWorld::create(const WorldConfig& cfg,
                                      std::uint64_t seed) {
  SyntheticWorld w;
  w.cfg_ = cfg;
  Rng rng(seed);
  const auto draw_weights = [&] {
    std::vector<double> v(static_cast<std::size_t>(cfg.feat_dim));
    // Scaled so w.x has roughly unit spread for uniform(-1,1) features;
    // qualities then cover most of (0,1) after the sigmoid.
    const double scale = 2.5 / std::sqrt(static_cast<double>(cfg.feat_dim));
    for (double& x : v) x = scale * rng.normal();
    return v;
  };
  w.w_single_ = draw_weights();
  for (int j = 0; j < 3; ++j) w.w_multi_.push_back(draw_weights());

  for (int a = 0; a < cfg.n_annotators; ++a) {
    AnnotatorProfile p;
    const double centered =
        cfg.n_annotators == 1
            ? 0.0
            : 2.0 * a / static_cast<double>(cfg.n_annotators - 1) - 1.0;
    p.offset = cfg.annotator_offset * centered;
    p.scale_mult = 1.0 + cfg.annotator_scale_jitter * centered;
    w.annotators_.push_back(p);
  }
  return w;
}

double SyntheticWorld::single_quality(const SyntheticVideo& v) const {
  return sigmoid(mean_dot(v, w_single_));
}

std::vector<double> SyntheticWorld::multi_quality(
    const SyntheticVideo& v) const {
  // Dim 1 is temporal quality: it discounts jerky motion, measured as the
  // mean absolute successive-frame difference. Sorted smooth drifts have
  // minimal total variation, so reordering the same frames lowers this dim
  // while leaving the mean-feature dims untouched.
  double tv = 0.0;
  const int T = v.frame_count();
  if (T >= 2) {
    for (int t = 0; t + 1 < T; ++t) {
      for (std::size_t k = 0; k < v.frames[0].size(); ++k) {
        tv += std::abs(v.frames[static_cast<std::size_t>(t) + 1][k] -
                       v.frames[static_cast<std::size_t>(t)][k]);
      }
    }
    tv /= static_cast<double>((T - 1) * static_cast<int>(v.frames[0].size()));
  }
  constexpr double kTvRef = 0.105;
  constexpr double kTvSlope = 15.0;
  constexpr double kTemporalMeanWeight = 0.5;
  std::vector<double> q;
  for (std::size_t j = 0; j < w_multi_.size(); ++j) {
    double logit = mean_dot(v, w_multi_[j]);
    if (j == 1) {
      logit = kTemporalMeanWeight * logit + kTvSlope * (kTvRef - tv);
    }
    q.push_back(sigmoid(logit));
  }
  return q;
}

double SyntheticWorld::latent_quality(std::span<const double> z) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) acc += z[k] * w_single_[k];
  return sigmoid(acc);
}

SyntheticVideo SyntheticWorld::decode_latent(std::span<const double> z) const {
  SyntheticVideo v;
  v.frames.assign(static_cast<std::size_t>(cfg_.frames),
                  std::vector<double>(z.begin(), z.end()));
  v.prompt_features.assign(static_cast<std::size_t>(cfg_.prompt_dim), 0.0);
  return v;
}

SyntheticVideo SyntheticWorld::random_video(Rng& rng, bool smooth) const {
  SyntheticVideo v;
  std::vector<double> base(static_cast<std::size_t>(cfg_.feat_dim));
  std::vector<double> dir(static_cast<std::size_t>(cfg_.feat_dim));
  for (double& x : base) x = rng.uniform(-1.0, 1.0);
  for (double& x : dir) x = rng.uniform(0.1, 0.5);

  const int T = cfg_.frames;
  for (int t = 0; t < T; ++t) {
    std::vector<double> frame(base);
    const double u = static_cast<double>(t) / (T - 1) - 0.5;  // mean zero
    for (int k = 0; k < cfg_.feat_dim; ++k) {
      frame[static_cast<std::size_t>(k)] +=
          u * dir[static_cast<std::size_t>(k)];
    }
    v.frames.push_back(std::move(frame));
  }
  if (!smooth) {
    // Same frame set in the max-jerk interleave order: a jumbled motion
    // pattern with the same mean features, so quality does not leak the
    // motion flag. The interleave maximizes frame-to-frame variation, so
    // any reshuffle of a jumbled video is calmer than the video itself.
    std::vector<int> perm;
    int lo = 0;
    int hi = T - 1;
    const bool from_low = rng.uniform() < 0.5;
    while (lo <= hi) {
      if (from_low) {
        perm.push_back(lo++);
        if (lo <= hi) perm.push_back(hi--);
      } else {
        perm.push_back(hi--);
        if (lo <= hi) perm.push_back(lo++);
      }
    }
    std::vector<std::vector<double>> jumbled;
    for (int t = 0; t < T; ++t) {
      jumbled.push_back(v.frames[static_cast<std::size_t>(
          perm[static_cast<std::size_t>(t)])]);
    }
    v.frames = std::move(jumbled);
  }
  v.prompt_features.resize(static_cast<std::size_t>(cfg_.prompt_dim));
  for (double& x : v.prompt_features) x = rng.uniform(-1.0, 1.0);
  return v;
}

SyntheticVideo SyntheticWorld::random_image(Rng& rng) const {
  SyntheticVideo v;
  std::vector<double> feat(static_cast<std::size_t>(cfg_.feat_dim));
  for (double& x : feat) x = rng.uniform(-1.0, 1.0);
  v.frames.assign(2, feat);  // images are two identical frames
  v.prompt_features.assign(static_cast<std::size_t>(cfg_.prompt_dim), 0.0);
  return v;
}

double SyntheticWorld::annotate(double quality, int annotator,
                                Rng& rng) const {
  const AnnotatorProfile& p =
      annotators_[static_cast<std::size_t>(annotator) % annotators_.size()];
  const double biased = p.offset + p.scale_mult * quality +
                        cfg_.annotator_noise * rng.normal();
  return std::clamp(biased, 0.0, 1.0);
}

GeneratedData gen_synthetic(const SyntheticWorld& world, Rng& rng) {
  const WorldConfig& cfg = world.config();
  GeneratedData out;

  const auto annotator_for = [&](int i) {
    return cfg.n_annotators > 0 ? i % cfg.n_annotators : 0;
  };

  const int n_image = cfg.n_image + cfg.n_image_holdout;
  for (int i = 0; i < n_image; ++i) {
    AnnotationRecord r;
    r.id = "img-" + std::to_string(i);
    r.kind = TaskKind::kImageScore;
    r.video = world.random_image(rng);
    r.scale = cfg.image_scale;
    const double q = world.single_quality(r.video);
    r.mos = world.annotate(q, annotator_for(i), rng);
    out.oracle.push_back({r.id, {q}});
    out.image.push_back(std::move(r));
  }

  const int n_multi = cfg.n_multidim + cfg.n_multidim_holdout;
  for (int i = 0; i < n_multi; ++i) {
    AnnotationRecord r;
    r.id = "mdim-" + std::to_string(i);
    r.kind = TaskKind::kVideoMultidim;
    // Alternate motion classes so the temporal-quality dim spans its range.
    r.video = world.random_video(rng, /*smooth=*/i % 2 == 0);
    r.scale = cfg.video_scale;
    const std::vector<double> q = world.multi_quality(r.video);
    for (std::size_t j = 0; j < q.size(); ++j) {
      double qj = q[j];
      // Temporal judgments are the hardest to annotate: training-split
      // scores on that dimension cluster around the scale midpoint with
      // idiosyncratic spread and carry no information about the video,
      // while the holdout split is curated. j == 1 is temporal quality.
      if (j == 1 && i < cfg.n_multidim) {
        qj = 0.5 + cfg.temporal_label_noise * (rng.uniform() - 0.5);
      }
      r.mos_multi.push_back(world.annotate(qj, annotator_for(i), rng));
    }
    out.oracle.push_back({r.id, q});
    out.multidim.push_back(std::move(r));
  }

  const int n_pairs = cfg.n_pairs + cfg.n_pairs_holdout;
  for (int i = 0; i < n_pairs; ++i) {
    AnnotationRecord r;
    r.id = "pair-" + std::to_string(i);
    r.kind = TaskKind::kPairCompare;
    r.video = world.random_video(rng, /*smooth=*/true);
    r.video_b = world.random_video(rng, /*smooth=*/true);
    r.scale = cfg.video_scale;
    const double gap =
        world.single_quality(r.video) - world.single_quality(r.video_b);
    if (std::abs(gap) < cfg.tie_margin) {
      r.pair_label = PairLabel::kTie;
    } else {
      r.pair_label = gap > 0.0 ? PairLabel::kA : PairLabel::kB;
    }
    out.oracle.push_back({r.id, {gap}});
    out.pairs.push_back(std::move(r));
  }

  const int n_vqa = cfg.n_vqa + cfg.n_vqa_holdout;
  for (int i = 0; i < n_vqa; ++i) {
    AnnotationRecord r;
    r.id = "vqa-" + std::to_string(i);
    r.kind = TaskKind::kVqa;
    const bool smooth = i % 2 == 0;
    r.video = world.random_video(rng, smooth);
    r.scale = cfg.video_scale;
    r.question_id = "motion-reasonable";
    // Training labels carry annotator mistakes; the holdout tail stays
    // curated. The oracle always records the true motion flag.
    const bool flip =
        i < cfg.n_vqa && rng.uniform() < cfg.vqa_label_noise;
    r.vqa_answer_yes = flip ? !smooth : smooth;
    out.oracle.push_back({r.id, {smooth ? 1.0 : 0.0}});
    out.vqa.push_back(std::move(r));
  }

  return out;
}

std::span<const AnnotationRecord> train_split(
    std::span<const AnnotationRecord> all, int holdout) {
  if (holdout < 0 || static_cast<std::size_t>(holdout) > all.size()) {
    throw std::invalid_argument("train_split: holdout out of range");
  }
  return all.subspan(0, all.size() - static_cast<std::size_t>(holdout));
}

std::span<const AnnotationRecord> holdout_split(
    std::span<const AnnotationRecord> all, int holdout) {
  if (holdout < 0 || static_cast<std::size_t>(holdout) > all.size()) {
    throw std::invalid_argument("holdout_split: holdout out of range");
  }
  return all.subspan(all.size() - static_cast<std::size_t>(holdout));
}

}  // namespace vidalign
