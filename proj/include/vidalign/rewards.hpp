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

#ifndef VIDALIGN_REWARDS_HPP_
#define VIDALIGN_REWARDS_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vidalign/annotations.hpp"
#include "vidalign/types.hpp"

namespace vidalign {

// Parsed payload of a well-formed completion. Scores are on the unit
// scale; MultiScore length must equal the task's dimension count.
struct ParsedAnswer {
  struct Score { double value; };
  struct MultiScore { std::vector<double> values; };
  struct ChoicePayload { Choice value; };
  struct YesNoPayload { YesNo value; };

  std::string think_text;
  std::variant<Score, MultiScore, ChoicePayload, YesNoPayload> payload;

  static ParsedAnswer make_score(double v, std::string think = "");
  static ParsedAnswer make_multi(std::vector<double> v, std::string think = "");
  static ParsedAnswer make_choice(Choice c, std::string think = "");
  static ParsedAnswer make_yes_no(YesNo yn, std::string think = "");
};

enum class MalformedReason {
  kMissingTag,
  kOrderViolation,
  kDuplicateTag,
  kUnparseablePayload,
};

std::string_view malformed_reason_name(MalformedReason reason);

// Malformed is a value, not a failure.
struct ParseResult {
  std::optional<ParsedAnswer> answer;
  std::optional<MalformedReason> reason;

  bool ok() const { return answer.has_value(); }
};

// Categories sampled by the toy policy; carried so the likelihood of a
// recorded completion can be rebuilt under new parameters.
struct SampleInfo {
  std::vector<int> answer_indices;  // one per answer head used by the task
  int length_bucket = -1;
  bool malformed = false;
};

struct Completion {
  std::string raw_text;
  std::optional<ParsedAnswer> parsed;
  int length_tokens = 0;
  std::optional<SampleInfo> sample;
};

struct RewardBreakdown {
  double format = 0.0;
  double task = 0.0;
  double temporal = 0.0;
  double length = 0.0;
  double total = 0.0;
};

struct RewardConfig {
  double alpha = 0.3;   // temporal bonus
  double mu = 0.8;      // temporal threshold factor
  double gamma = 0.1;   // length bonus
  int l_min = 320;
  int l_max = 512;
  std::vector<double> lambda = {1.0, 1.0, 1.0};
  double format_weight = 1.0;
};

// Whitespace-token proxy count.
int count_tokens(std::string_view text);

// Tag grammar, bit-exact: `<think>` body `</think>` optional-whitespace
// `<answer>` body `</answer>`, ASCII tags, single occurrence each, in
// order, nothing else around them. The answer body must parse for the
// task; choice / yes-no tokens are matched case-insensitively after
// trimming.
ParseResult parse_completion(std::string_view raw_text, TaskKind task);

// Inverse of parse_completion for well-formed payloads. The think body is
// filler words sized so the whole text has `target_tokens` whitespace
// tokens (subject to a minimum of one filler word).
std::string render_completion(const ParsedAnswer& answer, int target_tokens);

// Builds a Completion (raw text, parse, token count) from a payload.
Completion make_completion(const ParsedAnswer& answer, int target_tokens,
                           TaskKind task);

double format_reward(const Completion& c, const RewardConfig& cfg);

// 1 - |s_pred - s_gt|; both arguments must already be on the unit scale.
double score_reward(double s_pred, double s_gt);

// 1 - sum_j lambda_j * |v_pred_j - v_gt_j|; may be negative.
double multidim_reward(std::span<const double> v_pred,
                       std::span<const double> v_gt,
                       std::span<const double> lambda);

double preference_reward(Choice pred, Choice gt);
double preference_reward(YesNo pred, YesNo gt);
// Kind-checked variant over parsed payloads.
double preference_reward(const ParsedAnswer& pred, const ParsedAnswer& gt);

// alpha if w_seq > mu * w_rand (strict), else 0.
double temporal_reward(double w_seq, double w_rand, const RewardConfig& cfg);

// gamma if l_min < length < l_max (both strict), else 0.
double length_reward(int length_tokens, const RewardConfig& cfg);

// format + task + temporal + length. Malformed completions get task 0;
// temporal and length are still computed from the raw text length and the
// supplied shuffle probabilities. Probes are supplied only for
// single-video tasks with the temporal reward enabled.
RewardBreakdown total_reward(const Completion& c,
                             const AnnotationRecord& annotation,
                             std::optional<double> w_seq,
                             std::optional<double> w_rand,
                             const RewardConfig& cfg);

// Ground-truth payload of an annotation, as the policy would phrase it.
ParsedAnswer ground_truth_answer(const AnnotationRecord& annotation);

}  // namespace vidalign

#endif  // VIDALIGN_REWARDS_HPP_
