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

#ifndef VIDALIGN_GRPO_HPP_
#define VIDALIGN_GRPO_HPP_

#include <span>
#include <string>
#include <vector>

#include "vidalign/annotations.hpp"
#include "vidalign/policy.hpp"
#include "vidalign/rewards.hpp"
#include "vidalign/rng.hpp"

namespace vidalign {

struct RolloutGroup {
  std::string query_id;
  std::vector<Completion> completions;
  std::vector<double> rewards;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;
  std::vector<double> advantages;
};

struct GrpoConfig {
  int group_size = 8;
  double clip_delta = 0.2;
  double kl_beta = 0.001;
  int epochs = 3;
  double learning_rate = 1e-6;  // scaled up for toy models in configs
  double std_epsilon = 1e-8;
};

// Group-normalized advantages: (r_i - mean) / population std. Degenerate
// groups (std < std_epsilon) contribute no gradient and return all zeros.
std::vector<double> advantages(std::span<const double> rewards,
                               double std_epsilon);

double ratio(double logp_new, double logp_old);

// min(rho * adv, clip(rho, 1-delta, 1+delta) * adv)
double clipped_term(double rho, double adv, double delta);
Var clipped_term(Var rho, double adv, double delta);

// k3 estimator: exp(logp_ref - logp_new) - (logp_ref - logp_new) - 1 >= 0.
double kl_penalty(double logp_new, double logp_ref);
Var kl_penalty(Var logp_new, double logp_ref);

// Surrogate to minimize: -(1/N) sum_i [clipped_term_i - beta * k3_i],
// with rho_i and k3_i rebuilt from the live logp_new.
Var grpo_loss(std::span<const Var> logp_new, const RolloutGroup& group,
              const GrpoConfig& cfg);
double grpo_loss_value(std::span<const double> logp_new,
                       const RolloutGroup& group, const GrpoConfig& cfg);

// Loss builder over a policy's parameters for one recorded group; feeds
// numkit::grad and the finite-difference oracle.
LossBuilder make_grpo_loss_builder(const ToyPolicy& policy,
                                   const AnnotationRecord& record,
                                   const RolloutGroup& group,
                                   const GrpoConfig& cfg);

struct TrainingLogRow {
  int step = 0;
  std::string query_id;
  double mean_reward = 0.0;
  double loss = 0.0;
  double format_rate = 0.0;
  double mean_len = 0.0;
};

struct TrainingLog {
  std::vector<TrainingLogRow> rows;
};

struct StageOptions {
  bool tmr = false;  // temporal modeling reward
  bool lcr = true;   // length control reward
  int n_shuffles = 4;
};

// One pass of the GRPO training loop: per record, sample a group from the
// epoch-start policy snapshot, score it, normalize advantages, and take
// one gradient-descent step on the surrogate. The old policy is refreshed
// once per epoch; ref_policy stays fixed throughout.
TrainingLog train_stage(std::span<const AnnotationRecord> dataset,
                        ToyPolicy& policy, const ToyPolicy& ref_policy,
                        const GrpoConfig& cfg, const RewardConfig& reward_cfg,
                        const StageOptions& options, Rng& rng);

// Samples a group and fills rewards/advantages/likelihoods without
// touching the policy; shared by train_stage and the gradcheck suites.
RolloutGroup rollout_group(const AnnotationRecord& record,
                           const ToyPolicy& sampling_policy,
                           const ToyPolicy& ref_policy, const GrpoConfig& cfg,
                           const RewardConfig& reward_cfg,
                           const StageOptions& options, Rng& rng);

}  // namespace vidalign

#endif  // VIDALIGN_GRPO_HPP_
