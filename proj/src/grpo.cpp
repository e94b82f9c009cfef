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

#include "vidalign/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vidalign/checkpoint.hpp"

namespace vidalign {

std::vector<double> advantages(std::span<const double> rewards,
                               double std_epsilon) {
  const std::size_t n = rewards.size();
  if (n < 2) throw std::invalid_argument("advantages: group size must be >= 2");
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(n);  // population variance
  const double std = std::sqrt(var);
  std::vector<double> out(n, 0.0);
  if (std < std_epsilon) return out;  // degenerate group
  for (std::size_t i = 0; i < n; ++i) out[i] = (rewards[i] - mean) / std;
  return out;
}

double ratio(double logp_new, double logp_old) {
  return std::exp(logp_new - logp_old);
}

double clipped_term(double rho, double adv, double delta) {
  const double clipped = std::clamp(rho, 1.0 - delta, 1.0 + delta);
  return std::min(rho * adv, clipped * adv);
}

Var clipped_term(Var rho, double adv, double delta) {
  return vmin(rho * adv, clip(rho, 1.0 - delta, 1.0 + delta) * adv);
}

double kl_penalty(double logp_new, double logp_ref) {
  const double d = logp_ref - logp_new;
  return std::exp(d) - d - 1.0;
}

Var kl_penalty(Var logp_new, double logp_ref) {
  Var d = logp_ref - logp_new;
  return exp(d) - d - 1.0;
}

Var grpo_loss(std::span<const Var> logp_new, const RolloutGroup& group,
              const GrpoConfig& cfg) {
  if (logp_new.empty() || logp_new.size() != group.advantages.size()) {
    throw std::invalid_argument("grpo_loss: group not fully populated");
  }
  const std::size_t n = logp_new.size();
  Var acc = [&] {
    Var rho0 = exp(logp_new[0] - group.logp_old[0]);
    Var first = clipped_term(rho0, group.advantages[0], cfg.clip_delta) -
                cfg.kl_beta * kl_penalty(logp_new[0], group.logp_ref[0]);
    return first;
  }();
  for (std::size_t i = 1; i < n; ++i) {
    Var rho = exp(logp_new[i] - group.logp_old[i]);
    acc = acc + clipped_term(rho, group.advantages[i], cfg.clip_delta) -
          cfg.kl_beta * kl_penalty(logp_new[i], group.logp_ref[i]);
  }
  return acc * (-1.0 / static_cast<double>(n));
}

double grpo_loss_value(std::span<const double> logp_new,
                       const RolloutGroup& group, const GrpoConfig& cfg) {
  if (logp_new.empty() || logp_new.size() != group.advantages.size()) {
    throw std::invalid_argument("grpo_loss: group not fully populated");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < logp_new.size(); ++i) {
    const double rho = ratio(logp_new[i], group.logp_old[i]);
    acc += clipped_term(rho, group.advantages[i], cfg.clip_delta) -
           cfg.kl_beta * kl_penalty(logp_new[i], group.logp_ref[i]);
  }
  return -acc / static_cast<double>(logp_new.size());
}

LossBuilder make_grpo_loss_builder(const ToyPolicy& policy,
                                   const AnnotationRecord& record,
                                   const RolloutGroup& group,
                                   const GrpoConfig& cfg) {
  // Captured by value so the builder stays valid for repeated evaluation
  // by the finite-difference oracle.
  return [policy, record, group, cfg](Tape& tape,
                                      std::span<const Var> params) -> Var {
    const SyntheticVideo* vb =
        record.kind == TaskKind::kPairCompare ? &record.video_b : nullptr;
    std::vector<Var> logp_new;
    logp_new.reserve(group.completions.size());
    for (const Completion& c : group.completions) {
      logp_new.push_back(
          policy.logp_tape(tape, params, record.video, vb, c, record.kind));
    }
    return grpo_loss(logp_new, group, cfg);
  };
}

RolloutGroup rollout_group(const AnnotationRecord& record,
                           const ToyPolicy& sampling_policy,
                           const ToyPolicy& ref_policy, const GrpoConfig& cfg,
                           const RewardConfig& reward_cfg,
                           const StageOptions& options, Rng& rng) {
  const SyntheticVideo* vb =
      record.kind == TaskKind::kPairCompare ? &record.video_b : nullptr;

  RewardConfig effective = reward_cfg;
  if (!options.lcr) effective.gamma = 0.0;

  const bool probe =
      options.tmr && is_single_video_task(record.kind);

  RolloutGroup group;
  group.query_id = record.id;
  for (int i = 0; i < cfg.group_size; ++i) {
    PolicySample s = sampling_policy.sample(record.video, vb, record.kind, rng);
    group.logp_old.push_back(s.logp);
    group.logp_ref.push_back(
        ref_policy.logp(record.video, vb, s.completion, record.kind));

    std::optional<double> w_seq;
    std::optional<double> w_rand;
    if (probe) {
      // Probe at the completion's own answer when one was produced; a
      // malformed completion falls back to the ground truth, so its
      // temporal component stays defined.
      const ParsedAnswer& probe_answer = s.completion.parsed.has_value()
                                             ? *s.completion.parsed
                                             : ground_truth_answer(record);
      // The probe runs on a forked stream so that a run without the
      // temporal bonus consumes exactly the same main-stream draws; paired
      // ablation runs then differ only where the bonus itself differs.
      Rng probe_rng = rng.fork(fnv1a_hash(record.id) +
                               static_cast<std::uint64_t>(i));
      const auto [ws, wr] = answer_prob_sequential_vs_shuffled(
          sampling_policy, record.video, probe_answer, record.kind, probe_rng,
          options.n_shuffles);
      w_seq = ws;
      w_rand = wr;
    }
    const RewardBreakdown b =
        total_reward(s.completion, record, w_seq, w_rand, effective);
    group.rewards.push_back(b.total);
    group.completions.push_back(std::move(s.completion));
  }
  group.advantages = advantages(group.rewards, cfg.std_epsilon);
  return group;
}

TrainingLog train_stage(std::span<const AnnotationRecord> dataset,
                        ToyPolicy& policy, const ToyPolicy& ref_policy,
                        const GrpoConfig& cfg, const RewardConfig& reward_cfg,
                        const StageOptions& options, Rng& rng) {
  std::vector<const AnnotationRecord*> usable;
  for (const AnnotationRecord& r : dataset) {
    if (r.kind == TaskKind::kPairCompare && r.pair_label == PairLabel::kTie) {
      continue;  // ties carry no trainable choice label
    }
    usable.push_back(&r);
  }
  if (usable.empty()) throw std::invalid_argument("train_stage: empty dataset");

  TrainingLog log;
  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const ToyPolicy old_policy = policy;  // refreshed once per epoch
    for (const AnnotationRecord* record : usable) {
      RolloutGroup group = rollout_group(*record, old_policy, ref_policy, cfg,
                                         reward_cfg, options, rng);
      const LossBuilder builder =
          make_grpo_loss_builder(policy, *record, group, cfg);
      const GradResult g = grad(builder, policy.params());
      std::vector<double>& p = policy.params().values();
      for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] -= cfg.learning_rate * g.grad[j];
      }

      TrainingLogRow row;
      row.step = step++;
      row.query_id = record->id;
      double reward_sum = 0.0;
      double len_sum = 0.0;
      int well_formed = 0;
      for (std::size_t i = 0; i < group.completions.size(); ++i) {
        reward_sum += group.rewards[i];
        len_sum += group.completions[i].length_tokens;
        if (group.completions[i].parsed.has_value()) ++well_formed;
      }
      const double n = static_cast<double>(group.completions.size());
      row.mean_reward = reward_sum / n;
      row.loss = g.value;
      row.format_rate = well_formed / n;
      row.mean_len = len_sum / n;
      log.rows.push_back(std::move(row));
    }
  }
  return log;
}

}  // namespace vidalign
