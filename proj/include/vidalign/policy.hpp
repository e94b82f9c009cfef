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

#ifndef VIDALIGN_POLICY_HPP_
#define VIDALIGN_POLICY_HPP_

#include <span>
#include <utility>
#include <vector>

#include "vidalign/numkit.hpp"
#include "vidalign/param_vector.hpp"
#include "vidalign/rewards.hpp"
#include "vidalign/rng.hpp"
#include "vidalign/tape.hpp"
#include "vidalign/types.hpp"

namespace vidalign {

enum class PolicyHead {
  kScore0,
  kScore1,
  kScore2,
  kChoice,
  kYesNo,
  kLength,
  kFormat,
};

struct PolicyArch {
  int feat_dim = 8;
  int prompt_dim = 4;
  int hidden_dim = 16;
  int max_frames = 8;
  int score_bins = 21;
  int multi_dims = 3;
  // Proxy token counts; two of these fall inside the default (320, 512)
  // length window, so a uniform length head lands inside it 25% of the time.
  std::vector<int> length_buckets = {40, 120, 220, 300, 360, 450, 560, 700};
  // Initial probability of emitting broken tags. Learned away during
  // training via the format head.
  double malformed_rate = 0.05;

  double bin_center(int k) const {
    return static_cast<double>(k) / (score_bins - 1);
  }
  int head_size(PolicyHead head) const;
  // Answer heads used by a task (excludes length and format).
  std::vector<PolicyHead> answer_heads(TaskKind task) const;
};

struct PolicySample {
  Completion completion;
  double logp = 0.0;
};

// Two-layer categorical policy over synthetic videos.
//
// Frame pooling multiplies each frame elementwise by (1 + position
// embedding) before averaging; with zero position embeddings every output
// is exactly permutation-invariant over frames. A completion's likelihood
// factorizes as p(format bit) * p(answer categories) * p(length bucket);
// the think-filler text carries no probability.
class ToyPolicy {
 public:
  ToyPolicy(const PolicyArch& arch, Rng& init_rng);

  const PolicyArch& arch() const { return arch_; }
  ParamVector& params() { return params_; }
  const ParamVector& params() const { return params_; }

  // Probabilities of one head. `order_a` maps position t to a frame index
  // of video `a`; empty means identity (sequential) order.
  std::vector<double> head_probs(PolicyHead head, const SyntheticVideo& a,
                                 const SyntheticVideo* b,
                                 std::span<const int> order_a = {}) const;

  PolicySample sample(const SyntheticVideo& a, const SyntheticVideo* b,
                      TaskKind task, Rng& rng) const;

  // Log-probability of a recorded completion under current parameters.
  // Throws if the completion does not match the sampling template.
  double logp(const SyntheticVideo& a, const SyntheticVideo* b,
              const Completion& c, TaskKind task) const;

  // Same quantity as a differentiable tape expression; `param_vars` must
  // be inputs for this policy's full parameter vector.
  Var logp_tape(Tape& tape, std::span<const Var> param_vars,
                const SyntheticVideo& a, const SyntheticVideo* b,
                const Completion& c, TaskKind task) const;

  // Probability-weighted mean of the bin centers; the policy's point
  // prediction for scoring evaluation.
  double expected_score(const SyntheticVideo& video, int dim = 0) const;

  double choice_prob_a(const SyntheticVideo& a, const SyntheticVideo& b) const;
  // Deterministic comparison verdict (argmax; A at ties).
  Choice judge_choice(const SyntheticVideo& a, const SyntheticVideo& b) const;

  int nearest_bin(double score) const;
  // Template-exact lookups; return -1 when no entry matches.
  int exact_bin(double score) const;
  int bucket_index(int tokens) const;

 private:
  friend struct PolicyAccess;
  PolicyArch arch_;
  ParamVector params_;
};

// w_seq: probability mass the policy assigns to `gt_answer` with frames in
// sequential order. w_rand: mean of that mass over n_shuffles uniform
// non-identity frame permutations.
std::pair<double, double> answer_prob_sequential_vs_shuffled(
    const ToyPolicy& policy, const SyntheticVideo& video,
    const ParsedAnswer& gt_answer, TaskKind task, Rng& rng,
    int n_shuffles = 4);

}  // namespace vidalign

#endif  // VIDALIGN_POLICY_HPP_
