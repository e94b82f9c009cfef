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

#include "vidalign/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vidalign {

namespace {

struct HeadSeg {
  const char* w;
  const char* b;
};

HeadSeg head_segments(PolicyHead head) {
  switch (head) {
    case PolicyHead::kScore0: return {"score0_w", "score0_b"};
    case PolicyHead::kScore1: return {"score1_w", "score1_b"};
    case PolicyHead::kScore2: return {"score2_w", "score2_b"};
    case PolicyHead::kChoice: return {"choice_w", "choice_b"};
    case PolicyHead::kYesNo: return {"yesno_w", "yesno_b"};
    case PolicyHead::kLength: return {"len_w", "len_b"};
    case PolicyHead::kFormat: return {nullptr, "fmt_b"};
  }
  throw std::invalid_argument("unknown head");
}

// Elementwise frame pooling: pooled_k = mean_k + sum_t (f[order[t]][k]/T) *
// pos[t][k]. The mean term is order-independent; only the position-embedding
// interaction can distinguish frame orders.
template <class R>
std::vector<R> pooled_features(const PolicyArch& arch, std::span<const R> p,
                               std::size_t pos_off, const SyntheticVideo& v,
                               std::span<const int> order) {
  const int T = v.frame_count();
  const int d = arch.feat_dim;
  if (T < 1) throw std::invalid_argument("policy: video has no frames");
  if (T > arch.max_frames) {
    throw std::invalid_argument("policy: more frames than max_frames");
  }
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    double mean = 0.0;
    for (int t = 0; t < T; ++t) mean += v.frames[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
    mean /= T;
    const auto frame_at = [&](int t) {
      const int f = order.empty() ? t : order[static_cast<std::size_t>(t)];
      return v.frames[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)];
    };
    R acc = (frame_at(0) / T) * p[pos_off + static_cast<std::size_t>(k)];
    for (int t = 1; t < T; ++t) {
      acc = acc + (frame_at(t) / T) *
                      p[pos_off + static_cast<std::size_t>(t * d + k)];
    }
    out.push_back(acc + mean);
  }
  return out;
}

// Motion channel: mean absolute successive-frame difference in the presented
// order, gated elementwise by the "posd" embedding. Sorted smooth drifts have
// minimal total variation, so any reshuffle raises this signal. Zero posd
// (with zero pos) keeps the policy exactly permutation invariant.
template <class R>
std::vector<R> motion_features(const PolicyArch& arch, std::span<const R> p,
                               std::size_t posd_off, const SyntheticVideo& v,
                               std::span<const int> order) {
  const int T = v.frame_count();
  const int d = arch.feat_dim;
  const auto frame_at = [&](int t, int k) {
    const int f = order.empty() ? t : order[static_cast<std::size_t>(t)];
    return v.frames[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)];
  };
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    R acc = 0.0 * p[posd_off];
    for (int t = 0; t + 1 < T; ++t) {
      const double diff = std::fabs(frame_at(t + 1, k) - frame_at(t, k));
      acc = acc + diff * p[posd_off + static_cast<std::size_t>(t * d + k)];
    }
    out.push_back(acc);
  }
  return out;
}

// Hidden input layout: [pooled_a, motion_a, pooled_b, motion_b, prompt].
template <class R>
std::vector<R> hidden_layer(const PolicyArch& arch, std::span<const R> p,
                            std::size_t w1_off, std::size_t b1_off,
                            const std::vector<R>& pooled_a,
                            const std::vector<R>& motion_a,
                            const std::vector<R>* pooled_b,
                            const std::vector<R>* motion_b,
                            const std::vector<double>& prompt) {
  using std::tanh;
  const int d = arch.feat_dim;
  const int dp = arch.prompt_dim;
  const int in_dim = 4 * d + dp;
  std::vector<R> h;
  h.reserve(static_cast<std::size_t>(arch.hidden_dim));
  for (int i = 0; i < arch.hidden_dim; ++i) {
    const std::size_t row = w1_off + static_cast<std::size_t>(i * in_dim);
    R acc = p[b1_off + static_cast<std::size_t>(i)];
    for (int k = 0; k < d; ++k) {
      acc = acc + pooled_a[static_cast<std::size_t>(k)] *
                      p[row + static_cast<std::size_t>(k)];
      acc = acc + motion_a[static_cast<std::size_t>(k)] *
                      p[row + static_cast<std::size_t>(d + k)];
    }
    if (pooled_b != nullptr) {
      for (int k = 0; k < d; ++k) {
        acc = acc + (*pooled_b)[static_cast<std::size_t>(k)] *
                        p[row + static_cast<std::size_t>(2 * d + k)];
        acc = acc + (*motion_b)[static_cast<std::size_t>(k)] *
                        p[row + static_cast<std::size_t>(3 * d + k)];
      }
    }
    const int np = std::min<int>(dp, static_cast<int>(prompt.size()));
    for (int j = 0; j < np; ++j) {
      acc = acc + prompt[static_cast<std::size_t>(j)] *
                      p[row + static_cast<std::size_t>(4 * d + j)];
    }
    h.push_back(tanh(acc));
  }
  return h;
}

template <class R>
std::vector<R> head_logits(std::span<const R> p, std::size_t w_off,
                           std::size_t b_off, int n, const std::vector<R>& h) {
  std::vector<R> logits;
  logits.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    R acc = p[b_off + static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < h.size(); ++i) {
      acc = acc + h[i] * p[w_off + static_cast<std::size_t>(k) * h.size() + i];
    }
    logits.push_back(acc);
  }
  return logits;
}

double log_softmax_at(std::span<const double> logits, int idx) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double l : logits) s += std::exp(l - m);
  return logits[static_cast<std::size_t>(idx)] - m - std::log(s);
}

// Sampled format/answer/length categories for a recorded completion.
struct CompletionIndices {
  int fmt_bit = 0;  // 0 well-formed, 1 malformed
  std::vector<int> answers;
  int bucket = -1;
};

// Three tag-corruption variants, one per malformed-reason family.
std::string corrupt_text(const std::string& raw, int variant) {
  const std::size_t ao = raw.find("<answer>");
  const std::size_t ac = raw.find("</answer>");
  const std::string answer_block = raw.substr(ao, ac + 9 - ao);
  switch (variant % 3) {
    case 0: {
      std::string out = raw;
      const std::size_t tc = out.find("</think>");
      out.erase(tc, 8);
      return out;
    }
    case 1:
      return answer_block + " " + raw.substr(0, ao);
    default:
      return raw + " " + answer_block;
  }
}

}  // namespace

int PolicyArch::head_size(PolicyHead head) const {
  switch (head) {
    case PolicyHead::kScore0:
    case PolicyHead::kScore1:
    case PolicyHead::kScore2:
      return score_bins;
    case PolicyHead::kChoice:
    case PolicyHead::kYesNo:
    case PolicyHead::kFormat:
      return 2;
    case PolicyHead::kLength:
      return static_cast<int>(length_buckets.size());
  }
  throw std::invalid_argument("unknown head");
}

std::vector<PolicyHead> PolicyArch::answer_heads(TaskKind task) const {
  switch (task) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore:
      return {PolicyHead::kScore0};
    case TaskKind::kVideoMultidim: {
      std::vector<PolicyHead> heads = {PolicyHead::kScore0,
                                       PolicyHead::kScore1,
                                       PolicyHead::kScore2};
      heads.resize(static_cast<std::size_t>(multi_dims));
      return heads;
    }
    case TaskKind::kPairCompare:
      return {PolicyHead::kChoice};
    case TaskKind::kVqa:
      return {PolicyHead::kYesNo};
  }
  throw std::invalid_argument("unknown task");
}

ToyPolicy::ToyPolicy(const PolicyArch& arch, Rng& init_rng) : arch_(arch) {
  if (arch_.multi_dims > 3) {
    throw std::invalid_argument("ToyPolicy supports at most 3 score heads");
  }
  const int d = arch_.feat_dim;
  const int in_dim = 4 * d + arch_.prompt_dim;
  params_.add_segment("pos", static_cast<std::size_t>(arch_.max_frames),
                      static_cast<std::size_t>(d));
  params_.add_segment("posd", static_cast<std::size_t>(arch_.max_frames - 1),
                      static_cast<std::size_t>(d));
  params_.add_segment("w1", static_cast<std::size_t>(arch_.hidden_dim),
                      static_cast<std::size_t>(in_dim));
  params_.add_segment("b1", static_cast<std::size_t>(arch_.hidden_dim), 1);
  for (PolicyHead head :
       {PolicyHead::kScore0, PolicyHead::kScore1, PolicyHead::kScore2,
        PolicyHead::kChoice, PolicyHead::kYesNo, PolicyHead::kLength}) {
    const HeadSeg seg = head_segments(head);
    const std::size_t n = static_cast<std::size_t>(arch_.head_size(head));
    // Heads read the hidden activations plus a two-entry motion summary
    // (one per video slot), a short path from frame order to every answer.
    params_.add_segment(seg.w, n, static_cast<std::size_t>(arch_.hidden_dim + 2));
    params_.add_segment(seg.b, n, 1);
  }
  params_.add_segment("fmt_b", 2, 1);

  // Heads start at zero so every categorical is exactly uniform; only the
  // mixing layer needs symmetry breaking.
  const double scale = 0.5 / std::sqrt(static_cast<double>(in_dim));
  for (double& w : params_.segment("w1")) w = scale * init_rng.normal();
  // Position embeddings start at zero: all initial order sensitivity is
  // carried by the motion channel, whose sign is anchored by the prior
  // below, so frame-order behavior does not inherit init-lottery noise.
  // Unit gate on the motion channel: starts as plain total variation so the
  // mixing layer sees an O(1) order-sensitive signal from step one.
  for (double& w : params_.segment("posd")) w = 1.0;

  // Weak pretrained prior on the temporal-quality head: more gated frame
  // variation shifts mass toward lower score bins. This stands in for a
  // pretrained backbone's sense that jerky motion looks worse; training
  // is free to sharpen, rescale, or undo it.
  {
    std::span<double> w = params_.segment("score1_w");
    const int cols = arch_.hidden_dim + 2;
    const int b = arch_.score_bins;
    for (int k = 0; k < b; ++k) {
      w[static_cast<std::size_t>(k * cols + arch_.hidden_dim)] =
          2.0 * (0.5 - static_cast<double>(k) / (b - 1));
    }
  }

  const double r = std::clamp(arch_.malformed_rate, 1e-12, 1.0 - 1e-12);
  params_.segment("fmt_b")[0] = std::log((1.0 - r) / r);
}

int ToyPolicy::nearest_bin(double score) const {
  const double clamped = std::clamp(score, 0.0, 1.0);
  return static_cast<int>(std::lround(clamped * (arch_.score_bins - 1)));
}

int ToyPolicy::exact_bin(double score) const {
  const int k = nearest_bin(score);
  return std::fabs(arch_.bin_center(k) - score) < 1e-9 ? k : -1;
}

int ToyPolicy::bucket_index(int tokens) const {
  for (std::size_t i = 0; i < arch_.length_buckets.size(); ++i) {
    if (arch_.length_buckets[i] == tokens) return static_cast<int>(i);
  }
  return -1;
}

namespace {

template <class R>
struct Forward {
  const PolicyArch& arch;
  const ParamVector& layout;
  std::span<const R> p;
  std::vector<R> hidden;

  Forward(const PolicyArch& a, const ParamVector& l, std::span<const R> pv,
          const SyntheticVideo& va, const SyntheticVideo* vb,
          std::span<const int> order_a)
      : arch(a), layout(l), p(pv) {
    const std::size_t pos_off = layout.offset_of("pos");
    const std::size_t posd_off = layout.offset_of("posd");
    std::vector<R> pa = pooled_features<R>(arch, p, pos_off, va, order_a);
    std::vector<R> ma = motion_features<R>(arch, p, posd_off, va, order_a);
    std::vector<R> pb;
    std::vector<R> mb;
    if (vb != nullptr) {
      pb = pooled_features<R>(arch, p, pos_off, *vb, {});
      mb = motion_features<R>(arch, p, posd_off, *vb, {});
    }
    hidden = hidden_layer<R>(arch, p, layout.offset_of("w1"),
                             layout.offset_of("b1"), pa, ma,
                             vb != nullptr ? &pb : nullptr,
                             vb != nullptr ? &mb : nullptr,
                             va.prompt_features);
    // Motion-summary skip connection: heads see the mean gated variation
    // of each video slot directly. Zero with zero posd, preserving the
    // exact permutation-invariance null case.
    const auto summary = [&](const std::vector<R>& m) {
      R acc = 0.0 * p[0];
      for (const R& x : m) acc = acc + x;
      return acc / static_cast<double>(arch.feat_dim);
    };
    hidden.push_back(summary(ma));
    hidden.push_back(vb != nullptr ? summary(mb) : 0.0 * p[0]);
  }

  std::vector<R> logits(PolicyHead head) const {
    const HeadSeg seg = head_segments(head);
    const int n = arch.head_size(head);
    if (head == PolicyHead::kFormat) {
      const std::size_t off = layout.offset_of(seg.b);
      return {p[off], p[off + 1]};
    }
    return head_logits<R>(p, layout.offset_of(seg.w), layout.offset_of(seg.b),
                          n, hidden);
  }
};

}  // namespace

std::vector<double> ToyPolicy::head_probs(PolicyHead head,
                                          const SyntheticVideo& a,
                                          const SyntheticVideo* b,
                                          std::span<const int> order_a) const {
  Forward<double> fwd(arch_, params_, params_.values(), a, b, order_a);
  return softmax(fwd.logits(head));
}

PolicySample ToyPolicy::sample(const SyntheticVideo& a,
                               const SyntheticVideo* b, TaskKind task,
                               Rng& rng) const {
  if (task == TaskKind::kPairCompare && b == nullptr) {
    throw std::invalid_argument("sample: pair task needs two videos");
  }
  Forward<double> fwd(arch_, params_, params_.values(), a, b, {});

  const std::vector<double> fmt_probs = softmax(fwd.logits(PolicyHead::kFormat));
  const int fmt_bit = rng.categorical(fmt_probs);
  double logp = std::log(fmt_probs[static_cast<std::size_t>(fmt_bit)]);

  SampleInfo info;
  info.malformed = fmt_bit == 1;
  const std::vector<PolicyHead> heads = arch_.answer_heads(task);
  for (PolicyHead head : heads) {
    const std::vector<double> probs = softmax(fwd.logits(head));
    const int idx = rng.categorical(probs);
    info.answer_indices.push_back(idx);
    logp += std::log(probs[static_cast<std::size_t>(idx)]);
  }
  const std::vector<double> len_probs = softmax(fwd.logits(PolicyHead::kLength));
  info.length_bucket = rng.categorical(len_probs);
  logp += std::log(len_probs[static_cast<std::size_t>(info.length_bucket)]);

  // Payload from the sampled categories.
  ParsedAnswer answer = [&] {
    switch (task) {
      case TaskKind::kImageScore:
      case TaskKind::kNaturalVideoScore:
        return ParsedAnswer::make_score(arch_.bin_center(info.answer_indices[0]));
      case TaskKind::kVideoMultidim: {
        std::vector<double> values;
        for (int idx : info.answer_indices) {
          values.push_back(arch_.bin_center(idx));
        }
        return ParsedAnswer::make_multi(std::move(values));
      }
      case TaskKind::kPairCompare:
        return ParsedAnswer::make_choice(info.answer_indices[0] == 0
                                             ? Choice::kA
                                             : Choice::kB);
      case TaskKind::kVqa:
        return ParsedAnswer::make_yes_no(info.answer_indices[0] == 0
                                             ? YesNo::kYes
                                             : YesNo::kNo);
    }
    throw std::invalid_argument("unknown task");
  }();

  const int target_tokens =
      arch_.length_buckets[static_cast<std::size_t>(info.length_bucket)];
  Completion c;
  c.raw_text = render_completion(answer, target_tokens);
  if (info.malformed) {
    c.raw_text = corrupt_text(c.raw_text, rng.uniform_int(3));
    c.parsed = std::nullopt;
  } else {
    c.parsed = std::move(answer);
  }
  c.length_tokens = count_tokens(c.raw_text);
  c.sample = std::move(info);
  return PolicySample{std::move(c), logp};
}

namespace {

CompletionIndices resolve_indices(const ToyPolicy& policy, const Completion& c,
                                  TaskKind task) {
  const PolicyArch& arch = policy.arch();
  CompletionIndices idx;
  if (c.sample.has_value()) {
    idx.fmt_bit = c.sample->malformed ? 1 : 0;
    idx.answers = c.sample->answer_indices;
    idx.bucket = c.sample->length_bucket;
  } else {
    if (!c.parsed.has_value()) {
      throw std::invalid_argument(
          "logp: malformed completion without sample record");
    }
    idx.fmt_bit = 0;
    const ParsedAnswer& a = *c.parsed;
    switch (task) {
      case TaskKind::kImageScore:
      case TaskKind::kNaturalVideoScore: {
        const int k =
            policy.exact_bin(std::get<ParsedAnswer::Score>(a.payload).value);
        if (k < 0) throw std::invalid_argument("logp: score off the bin grid");
        idx.answers = {k};
        break;
      }
      case TaskKind::kVideoMultidim: {
        const auto& m = std::get<ParsedAnswer::MultiScore>(a.payload).values;
        if (static_cast<int>(m.size()) != arch.multi_dims) {
          throw std::invalid_argument("logp: wrong dimension count");
        }
        for (double v : m) {
          const int k = policy.exact_bin(v);
          if (k < 0) throw std::invalid_argument("logp: score off the bin grid");
          idx.answers.push_back(k);
        }
        break;
      }
      case TaskKind::kPairCompare:
        idx.answers = {std::get<ParsedAnswer::ChoicePayload>(a.payload).value ==
                               Choice::kA
                           ? 0
                           : 1};
        break;
      case TaskKind::kVqa:
        idx.answers = {std::get<ParsedAnswer::YesNoPayload>(a.payload).value ==
                               YesNo::kYes
                           ? 0
                           : 1};
        break;
    }
    idx.bucket = policy.bucket_index(c.length_tokens);
    if (idx.bucket < 0) {
      throw std::invalid_argument("logp: token count matches no bucket");
    }
  }
  const std::vector<PolicyHead> heads = arch.answer_heads(task);
  if (idx.answers.size() != heads.size() || idx.bucket < 0 ||
      idx.bucket >= static_cast<int>(arch.length_buckets.size())) {
    throw std::invalid_argument("logp: completion does not match template");
  }
  return idx;
}

}  // namespace

double ToyPolicy::logp(const SyntheticVideo& a, const SyntheticVideo* b,
                       const Completion& c, TaskKind task) const {
  const CompletionIndices idx = resolve_indices(*this, c, task);
  Forward<double> fwd(arch_, params_, params_.values(), a, b, {});
  double lp = log_softmax_at(fwd.logits(PolicyHead::kFormat), idx.fmt_bit);
  const std::vector<PolicyHead> heads = arch_.answer_heads(task);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    lp += log_softmax_at(fwd.logits(heads[i]), idx.answers[i]);
  }
  lp += log_softmax_at(fwd.logits(PolicyHead::kLength), idx.bucket);
  return lp;
}

Var ToyPolicy::logp_tape(Tape& tape, std::span<const Var> param_vars,
                         const SyntheticVideo& a, const SyntheticVideo* b,
                         const Completion& c, TaskKind task) const {
  if (param_vars.size() != params_.size()) {
    throw std::invalid_argument("logp_tape: parameter count mismatch");
  }
  const CompletionIndices idx = resolve_indices(*this, c, task);
  Forward<Var> fwd(arch_, params_, param_vars, a, b, {});

  auto logp_at = [&](PolicyHead head, int k) {
    const std::vector<Var> logits = fwd.logits(head);
    return log_softmax(logits)[static_cast<std::size_t>(k)];
  };
  Var lp = logp_at(PolicyHead::kFormat, idx.fmt_bit);
  const std::vector<PolicyHead> heads = arch_.answer_heads(task);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    lp = lp + logp_at(heads[i], idx.answers[i]);
  }
  lp = lp + logp_at(PolicyHead::kLength, idx.bucket);
  (void)tape;
  return lp;
}

double ToyPolicy::expected_score(const SyntheticVideo& video, int dim) const {
  static constexpr PolicyHead kDims[] = {PolicyHead::kScore0,
                                         PolicyHead::kScore1,
                                         PolicyHead::kScore2};
  const std::vector<double> probs =
      head_probs(kDims[static_cast<std::size_t>(dim)], video, nullptr);
  double mean = 0.0;
  for (int k = 0; k < arch_.score_bins; ++k) {
    mean += probs[static_cast<std::size_t>(k)] * arch_.bin_center(k);
  }
  return mean;
}

double ToyPolicy::choice_prob_a(const SyntheticVideo& a,
                                const SyntheticVideo& b) const {
  return head_probs(PolicyHead::kChoice, a, &b)[0];
}

Choice ToyPolicy::judge_choice(const SyntheticVideo& a,
                               const SyntheticVideo& b) const {
  return choice_prob_a(a, b) >= 0.5 ? Choice::kA : Choice::kB;
}

std::pair<double, double> answer_prob_sequential_vs_shuffled(
    const ToyPolicy& policy, const SyntheticVideo& video,
    const ParsedAnswer& gt_answer, TaskKind task, Rng& rng, int n_shuffles) {
  if (!is_single_video_task(task)) {
    throw std::invalid_argument("temporal probe: pair tasks are excluded");
  }
  if (n_shuffles < 1) {
    throw std::invalid_argument("temporal probe: n_shuffles must be >= 1");
  }
  const PolicyArch& arch = policy.arch();

  const auto mass = [&](std::span<const int> order) {
    double m = 1.0;
    const std::vector<PolicyHead> heads = arch.answer_heads(task);
    switch (task) {
      case TaskKind::kImageScore:
      case TaskKind::kNaturalVideoScore: {
        const double s = std::get<ParsedAnswer::Score>(gt_answer.payload).value;
        const auto probs = policy.head_probs(heads[0], video, nullptr, order);
        m = probs[static_cast<std::size_t>(policy.nearest_bin(s))];
        break;
      }
      case TaskKind::kVideoMultidim: {
        const auto& v =
            std::get<ParsedAnswer::MultiScore>(gt_answer.payload).values;
        for (std::size_t j = 0; j < heads.size(); ++j) {
          const auto probs = policy.head_probs(heads[j], video, nullptr, order);
          m *= probs[static_cast<std::size_t>(policy.nearest_bin(v[j]))];
        }
        break;
      }
      case TaskKind::kVqa: {
        const auto probs = policy.head_probs(heads[0], video, nullptr, order);
        const YesNo yn = std::get<ParsedAnswer::YesNoPayload>(gt_answer.payload).value;
        m = probs[yn == YesNo::kYes ? 0 : 1];
        break;
      }
      default:
        throw std::invalid_argument("temporal probe: unsupported task");
    }
    return m;
  };

  const double w_seq = mass({});

  const int T = video.frame_count();
  std::vector<int> identity(static_cast<std::size_t>(T));
  std::iota(identity.begin(), identity.end(), 0);

  double w_rand = 0.0;
  for (int s = 0; s < n_shuffles; ++s) {
    std::vector<int> perm = identity;
    if (T >= 2) {
      do {
        rng.shuffle(perm);
      } while (perm == identity);
    }
    w_rand += mass(perm);
  }
  w_rand /= n_shuffles;
  return {w_seq, w_rand};
}

}  // namespace vidalign
