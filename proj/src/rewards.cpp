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

#include "vidalign/rewards.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace vidalign {

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

int count_occurrences(std::string_view text, std::string_view needle) {
  int n = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

bool parse_real(std::string_view token, double* out) {
  const std::string buf(token);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0') return false;
  *out = v;
  return true;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

std::optional<ParsedAnswer> parse_payload(std::string_view body,
                                          TaskKind task, std::string think) {
  const std::string_view trimmed = trim(body);
  switch (task) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore: {
      double v = 0.0;
      if (!parse_real(trimmed, &v)) return std::nullopt;
      return ParsedAnswer::make_score(v, std::move(think));
    }
    case TaskKind::kVideoMultidim: {
      std::string replaced(trimmed);
      std::replace(replaced.begin(), replaced.end(), ',', ' ');
      std::vector<double> values;
      for (const std::string& tok : split_tokens(replaced)) {
        double v = 0.0;
        if (!parse_real(tok, &v)) return std::nullopt;
        values.push_back(v);
      }
      if (values.empty()) return std::nullopt;
      return ParsedAnswer::make_multi(std::move(values), std::move(think));
    }
    case TaskKind::kPairCompare: {
      std::vector<std::string> tokens = split_tokens(lower(trimmed));
      if (tokens.size() != 2 || tokens[0] != "video") return std::nullopt;
      if (tokens[1] == "a") {
        return ParsedAnswer::make_choice(Choice::kA, std::move(think));
      }
      if (tokens[1] == "b") {
        return ParsedAnswer::make_choice(Choice::kB, std::move(think));
      }
      return std::nullopt;
    }
    case TaskKind::kVqa: {
      const std::string word = lower(trimmed);
      if (word == "yes") {
        return ParsedAnswer::make_yes_no(YesNo::kYes, std::move(think));
      }
      if (word == "no") {
        return ParsedAnswer::make_yes_no(YesNo::kNo, std::move(think));
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Rotating filler vocabulary for rendered think bodies.
constexpr const char* kFillerWords[] = {
    "frames", "remain",   "steady", "with",  "clear",  "detail",
    "and",    "the",      "motion", "flows", "evenly", "across",
    "scenes", "lighting", "stays",  "consistent",
};

}  // namespace

ParsedAnswer ParsedAnswer::make_score(double v, std::string think) {
  ParsedAnswer a;
  a.think_text = std::move(think);
  a.payload = Score{v};
  return a;
}

ParsedAnswer ParsedAnswer::make_multi(std::vector<double> v,
                                      std::string think) {
  ParsedAnswer a;
  a.think_text = std::move(think);
  a.payload = MultiScore{std::move(v)};
  return a;
}

ParsedAnswer ParsedAnswer::make_choice(Choice c, std::string think) {
  ParsedAnswer a;
  a.think_text = std::move(think);
  a.payload = ChoicePayload{c};
  return a;
}

ParsedAnswer ParsedAnswer::make_yes_no(YesNo yn, std::string think) {
  ParsedAnswer a;
  a.think_text = std::move(think);
  a.payload = YesNoPayload{yn};
  return a;
}

std::string_view malformed_reason_name(MalformedReason reason) {
  switch (reason) {
    case MalformedReason::kMissingTag: return "missing tag";
    case MalformedReason::kOrderViolation: return "order violation";
    case MalformedReason::kDuplicateTag: return "duplicate tag";
    case MalformedReason::kUnparseablePayload: return "unparseable payload";
  }
  return "?";
}

int count_tokens(std::string_view text) {
  int n = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

ParseResult parse_completion(std::string_view raw_text, TaskKind task) {
  const std::string_view text = trim(raw_text);

  const int think_open = count_occurrences(text, kThinkOpen);
  const int think_close = count_occurrences(text, kThinkClose);
  const int answer_open = count_occurrences(text, kAnswerOpen);
  const int answer_close = count_occurrences(text, kAnswerClose);

  auto malformed = [](MalformedReason r) {
    return ParseResult{std::nullopt, r};
  };

  if (think_open > 1 || think_close > 1 || answer_open > 1 ||
      answer_close > 1) {
    return malformed(MalformedReason::kDuplicateTag);
  }
  if (think_open < 1 || think_close < 1 || answer_open < 1 ||
      answer_close < 1) {
    return malformed(MalformedReason::kMissingTag);
  }

  const std::size_t to = text.find(kThinkOpen);
  const std::size_t tc = text.find(kThinkClose);
  const std::size_t ao = text.find(kAnswerOpen);
  const std::size_t ac = text.find(kAnswerClose);

  if (!(to < tc && tc < ao && ao < ac) || to != 0 ||
      ac + kAnswerClose.size() != text.size()) {
    return malformed(MalformedReason::kOrderViolation);
  }
  // Only whitespace may separate the two blocks.
  const std::string_view gap =
      text.substr(tc + kThinkClose.size(), ao - tc - kThinkClose.size());
  if (!trim(gap).empty()) {
    return malformed(MalformedReason::kOrderViolation);
  }

  std::string think(trim(text.substr(to + kThinkOpen.size(),
                                     tc - to - kThinkOpen.size())));
  const std::string_view body =
      text.substr(ao + kAnswerOpen.size(), ac - ao - kAnswerOpen.size());

  std::optional<ParsedAnswer> answer =
      parse_payload(body, task, std::move(think));
  if (!answer) return malformed(MalformedReason::kUnparseablePayload);
  return ParseResult{std::move(answer), std::nullopt};
}

std::string render_completion(const ParsedAnswer& answer, int target_tokens) {
  std::string payload;
  std::visit(
      [&payload](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ParsedAnswer::Score>) {
          payload = format_real(p.value);
        } else if constexpr (std::is_same_v<T, ParsedAnswer::MultiScore>) {
          for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (i) payload += ' ';
            payload += format_real(p.values[i]);
          }
        } else if constexpr (std::is_same_v<T, ParsedAnswer::ChoicePayload>) {
          payload = p.value == Choice::kA ? "video A" : "video B";
        } else {
          payload = p.value == YesNo::kYes ? "yes" : "no";
        }
      },
      answer.payload);

  // <think> F filler words </think> <answer> P words </answer>
  // total tokens = F + P + 4.
  const int payload_tokens = count_tokens(payload);
  const int filler = std::max(1, target_tokens - payload_tokens - 4);
  constexpr int kVocab =
      static_cast<int>(sizeof(kFillerWords) / sizeof(kFillerWords[0]));

  std::string out;
  out.reserve(static_cast<std::size_t>(filler) * 8 + payload.size() + 48);
  out += kThinkOpen;
  for (int i = 0; i < filler; ++i) {
    out += ' ';
    out += kFillerWords[i % kVocab];
  }
  out += ' ';
  out += kThinkClose;
  out += ' ';
  out += kAnswerOpen;
  out += ' ';
  out += payload;
  out += ' ';
  out += kAnswerClose;
  return out;
}

Completion make_completion(const ParsedAnswer& answer, int target_tokens,
                           TaskKind task) {
  Completion c;
  c.raw_text = render_completion(answer, target_tokens);
  c.length_tokens = count_tokens(c.raw_text);
  ParseResult parsed = parse_completion(c.raw_text, task);
  c.parsed = std::move(parsed.answer);
  return c;
}

double format_reward(const Completion& c, const RewardConfig& cfg) {
  return c.parsed.has_value() ? cfg.format_weight : 0.0;
}

double score_reward(double s_pred, double s_gt) {
  if (s_pred < 0.0 || s_pred > 1.0 || s_gt < 0.0 || s_gt > 1.0) {
    throw std::invalid_argument(
        "score_reward: inputs must lie in [0,1]; normalize upstream");
  }
  return 1.0 - std::fabs(s_pred - s_gt);
}

double multidim_reward(std::span<const double> v_pred,
                       std::span<const double> v_gt,
                       std::span<const double> lambda) {
  if (v_pred.size() != v_gt.size() || v_pred.size() != lambda.size()) {
    throw std::invalid_argument("multidim_reward: length mismatch");
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < v_pred.size(); ++j) {
    penalty += lambda[j] * std::fabs(v_pred[j] - v_gt[j]);
  }
  return 1.0 - penalty;
}

double preference_reward(Choice pred, Choice gt) {
  return pred == gt ? 1.0 : 0.0;
}

double preference_reward(YesNo pred, YesNo gt) {
  return pred == gt ? 1.0 : 0.0;
}

double preference_reward(const ParsedAnswer& pred, const ParsedAnswer& gt) {
  const auto* pc = std::get_if<ParsedAnswer::ChoicePayload>(&pred.payload);
  const auto* gc = std::get_if<ParsedAnswer::ChoicePayload>(&gt.payload);
  if (pc && gc) return preference_reward(pc->value, gc->value);
  const auto* py = std::get_if<ParsedAnswer::YesNoPayload>(&pred.payload);
  const auto* gy = std::get_if<ParsedAnswer::YesNoPayload>(&gt.payload);
  if (py && gy) return preference_reward(py->value, gy->value);
  throw std::invalid_argument("preference_reward: payload kind mismatch");
}

double temporal_reward(double w_seq, double w_rand, const RewardConfig& cfg) {
  return w_seq > cfg.mu * w_rand ? cfg.alpha : 0.0;
}

double length_reward(int length_tokens, const RewardConfig& cfg) {
  return (cfg.l_min < length_tokens && length_tokens < cfg.l_max) ? cfg.gamma
                                                                  : 0.0;
}

ParsedAnswer ground_truth_answer(const AnnotationRecord& annotation) {
  switch (annotation.kind) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore:
      return ParsedAnswer::make_score(annotation.mos);
    case TaskKind::kVideoMultidim:
      return ParsedAnswer::make_multi(annotation.mos_multi);
    case TaskKind::kPairCompare:
      if (annotation.pair_label == PairLabel::kTie) {
        throw std::invalid_argument(
            "ground_truth_answer: tie pairs carry no choice label");
      }
      return ParsedAnswer::make_choice(
          annotation.pair_label == PairLabel::kA ? Choice::kA : Choice::kB);
    case TaskKind::kVqa:
      return ParsedAnswer::make_yes_no(annotation.vqa_answer_yes ? YesNo::kYes
                                                                 : YesNo::kNo);
  }
  throw std::invalid_argument("ground_truth_answer: unknown kind");
}

RewardBreakdown total_reward(const Completion& c,
                             const AnnotationRecord& annotation,
                             std::optional<double> w_seq,
                             std::optional<double> w_rand,
                             const RewardConfig& cfg) {
  if (w_seq.has_value() != w_rand.has_value()) {
    throw std::invalid_argument("total_reward: probe pair incomplete");
  }
  if (w_seq.has_value() && !is_single_video_task(annotation.kind)) {
    throw std::invalid_argument(
        "total_reward: temporal probes only apply to single-video tasks");
  }

  RewardBreakdown b;
  b.format = format_reward(c, cfg);

  if (c.parsed.has_value()) {
    const ParsedAnswer& pred = *c.parsed;
    switch (annotation.kind) {
      case TaskKind::kImageScore:
      case TaskKind::kNaturalVideoScore: {
        const auto& s = std::get<ParsedAnswer::Score>(pred.payload);
        b.task = score_reward(s.value, annotation.mos);
        break;
      }
      case TaskKind::kVideoMultidim: {
        const auto& m = std::get<ParsedAnswer::MultiScore>(pred.payload);
        b.task = multidim_reward(m.values, annotation.mos_multi, cfg.lambda);
        break;
      }
      case TaskKind::kPairCompare:
      case TaskKind::kVqa:
        b.task = preference_reward(pred, ground_truth_answer(annotation));
        break;
    }
  }

  if (w_seq.has_value()) b.temporal = temporal_reward(*w_seq, *w_rand, cfg);
  b.length = length_reward(c.length_tokens, cfg);
  b.total = b.format + b.task + b.temporal + b.length;
  return b;
}

}  // namespace vidalign
