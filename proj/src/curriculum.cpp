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

#include "vidalign/curriculum.hpp"

#include <stdexcept>
#include <utility>

namespace vidalign {

StageResult run_stage1(const Stage1Plan& plan, const ToyPolicy& policy_init,
                       const AblationFlags& ablations, Rng& rng) {
  StageResult out{policy_init, {}};
  if (!ablations.warmup) return out;
  if (plan.dataset.empty()) {
    throw std::invalid_argument("stage 1: empty dataset");
  }
  // Warm-up trains on format plus score only; temporal and length bonuses
  // enter at stage 2.
  const StageOptions options{/*tmr=*/false, /*lcr=*/false, /*n_shuffles=*/4};
  out.log = train_stage(plan.dataset, out.policy, policy_init, plan.grpo,
                        plan.reward, options, rng);
  return out;
}

StageResult run_stage2(const Stage2Plan& plan, const ToyPolicy& policy_stage1,
                       const AblationFlags& ablations, Rng& rng) {
  struct UsableEntry {
    double weight;
    std::vector<const AnnotationRecord*> records;
  };
  std::vector<UsableEntry> entries;
  double weight_sum = 0.0;
  for (const TaskMixEntry& e : plan.mix) {
    if (e.weight < 0.0) {
      throw std::invalid_argument("stage 2: negative mix weight");
    }
    UsableEntry u{e.weight, {}};
    for (const AnnotationRecord& r : e.records) {
      if (r.kind != e.kind) {
        throw std::invalid_argument("stage 2: record kind differs from mix entry");
      }
      if (r.kind == TaskKind::kPairCompare && r.pair_label == PairLabel::kTie) {
        continue;  // ties carry no trainable choice label
      }
      u.records.push_back(&r);
    }
    if (e.weight > 0.0 && !u.records.empty()) {
      weight_sum += e.weight;
      entries.push_back(std::move(u));
    }
  }
  if (entries.empty()) {
    throw std::invalid_argument("stage 2: no usable task-mix entries");
  }
  std::vector<double> probs;
  for (const UsableEntry& e : entries) probs.push_back(e.weight / weight_sum);

  StageResult out{policy_stage1, {}};
  const ToyPolicy ref = policy_stage1;
  const StageOptions options{ablations.tmr, ablations.lcr, plan.n_shuffles};
  for (int step = 0; step < plan.steps; ++step) {
    const UsableEntry& entry =
        entries[static_cast<std::size_t>(rng.categorical(probs))];
    const AnnotationRecord& record = *entry.records[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(entry.records.size())))];

    const ToyPolicy old_policy = out.policy;
    const RolloutGroup group = rollout_group(record, old_policy, ref,
                                             plan.grpo, plan.reward, options,
                                             rng);
    const LossBuilder builder =
        make_grpo_loss_builder(out.policy, record, group, plan.grpo);
    const GradResult g = grad(builder, out.policy.params());
    std::vector<double>& p = out.policy.params().values();
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] -= plan.grpo.learning_rate * g.grad[j];
    }

    TrainingLogRow row;
    row.step = step;
    row.query_id = record.id;
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
    out.log.rows.push_back(std::move(row));
    if (plan.snapshot_every > 0 && (step + 1) % plan.snapshot_every == 0) {
      out.snapshots.push_back(out.policy);
    }
  }
  return out;
}

Judge make_policy_judge(
    const ToyPolicy& policy,
    std::function<SyntheticVideo(std::span<const double>)> decode) {
  return [policy, decode = std::move(decode)](
             std::span<const double> a, std::span<const double> b) -> Choice {
    return policy.judge_choice(decode(a), decode(b));
  };
}

namespace {

std::vector<CandidatePool> generate_pools(const ToyGenerator& gen,
                                          const Stage3Plan& plan, Rng& rng) {
  std::vector<CandidatePool> pools;
  for (int p = 0; p < plan.prompts; ++p) {
    CandidatePool pool;
    pool.prompt_id = "prompt-" + std::to_string(p);
    for (int c = 0; c < plan.pool_size; ++c) {
      pool.candidates.push_back(generate(gen, plan.schedule, rng));
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

std::vector<WinLosePair> mine_pairs(std::span<const CandidatePool> pools,
                                    const Judge& judge) {
  std::vector<WinLosePair> pairs;
  for (const CandidatePool& pool : pools) {
    pairs.push_back(run_tournament(pool, judge).pair);
  }
  return pairs;
}

std::vector<AnnotationRecord> pairs_to_records(
    std::span<const WinLosePair> pairs, const Stage3Plan& plan) {
  std::vector<AnnotationRecord> records;
  int i = 0;
  for (const WinLosePair& p : pairs) {
    AnnotationRecord r;
    r.id = "chat-" + std::to_string(i);
    r.kind = TaskKind::kPairCompare;
    // Alternate which side the winner is shown on; a fixed side would
    // teach the judge the presentation slot instead of the content.
    if (i % 2 == 0) {
      r.video = plan.decode(p.winner);
      r.video_b = plan.decode(p.loser);
      r.pair_label = PairLabel::kA;
    } else {
      r.video = plan.decode(p.loser);
      r.video_b = plan.decode(p.winner);
      r.pair_label = PairLabel::kB;
    }
    records.push_back(std::move(r));
    ++i;
  }
  return records;
}

double oracle_win_rate(const ToyGenerator& challenger,
                       const ToyGenerator& incumbent, const Stage3Plan& plan,
                       Rng& rng) {
  int wins = 0;
  for (int p = 0; p < plan.prompts; ++p) {
    const std::vector<double> zc = generate(challenger, plan.schedule, rng);
    const std::vector<double> zi = generate(incumbent, plan.schedule, rng);
    if (plan.oracle_quality(zc) > plan.oracle_quality(zi)) ++wins;
  }
  return static_cast<double>(wins) / plan.prompts;
}

}  // namespace

Stage3Result run_stage3(const Stage3Plan& plan, const ToyPolicy& judge_stage2,
                        const ToyGenerator& generator_init,
                        const AblationFlags& ablations, Rng& rng) {
  if (!plan.decode) {
    throw std::invalid_argument("stage 3: decode hook is required");
  }
  Stage3Result out{generator_init, judge_stage2, {}, 0};

  for (int round = 0; round < plan.rounds; ++round) {
    const ToyGenerator round_start = out.generator;

    // (a, b) Mine win-lose pairs C from fresh pools under the current judge.
    const Judge judge = make_policy_judge(out.judge, plan.decode);
    const std::vector<CandidatePool> pools =
        generate_pools(out.generator, plan, rng);
    const std::vector<WinLosePair> pairs_c = mine_pairs(pools, judge);

    // (c) First DPO pass against the round-start reference.
    {
      const ToyGenerator ref = out.generator;
      dpo_finetune(out.generator, ref, pairs_c, plan.schedule, plan.dpo, rng);
    }

    if (ablations.uf) {
      // (d, e) Regenerate with the improved generator and refresh pairs:
      // each new pool's winner is paired with the prompt's old losers.
      const std::vector<CandidatePool> new_pools =
          generate_pools(out.generator, plan, rng);
      std::vector<WinLosePair> pairs_chat;
      for (const CandidatePool& pool : new_pools) {
        RefreshResult r = refresh_pairs(pool, pairs_c, judge);
        out.refresh_warnings += r.warnings;
        for (WinLosePair& p : r.pairs) pairs_chat.push_back(std::move(p));
      }

      // (f) Continue judge training on C-hat plus the stage-2 pair subset.
      // Runs through the stage-2 loop so the old policy is snapshotted per
      // step; a stale epoch-long snapshot lets the unclipped negative-
      // advantage branch blow up on this much data.
      std::vector<AnnotationRecord> judge_data =
          pairs_to_records(pairs_chat, plan);
      for (const AnnotationRecord& r : plan.stage2_pairs) {
        if (r.pair_label != PairLabel::kTie) judge_data.push_back(r);
      }
      Stage2Plan judge_plan;
      judge_plan.grpo = plan.judge_grpo;
      judge_plan.reward = plan.reward;
      judge_plan.mix.push_back(
          {TaskKind::kPairCompare, 1.0, std::move(judge_data)});
      judge_plan.steps = plan.judge_grpo.epochs *
                         static_cast<int>(judge_plan.mix[0].records.size());
      AblationFlags judge_ablations = ablations;
      judge_ablations.tmr = false;  // pair tasks never take the temporal bonus
      out.judge =
          run_stage2(judge_plan, out.judge, judge_ablations, rng).policy;

      // (g) Rebuild pairs under the retrained judge and run the second
      // DPO pass against the post-first-pass reference.
      const Judge judge2 = make_policy_judge(out.judge, plan.decode);
      const std::vector<WinLosePair> pairs_c2 = mine_pairs(new_pools, judge2);
      const ToyGenerator ref2 = out.generator;
      dpo_finetune(out.generator, ref2, pairs_c2, plan.schedule, plan.dpo,
                   rng);
    }

    if (plan.oracle_quality) {
      out.round_win_rates.push_back(
          oracle_win_rate(out.generator, round_start, plan, rng));
    }
  }
  return out;
}

}  // namespace vidalign
