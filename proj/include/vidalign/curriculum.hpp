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

#ifndef VIDALIGN_CURRICULUM_HPP_
#define VIDALIGN_CURRICULUM_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vidalign/annotations.hpp"
#include "vidalign/diffusion.hpp"
#include "vidalign/dpo.hpp"
#include "vidalign/grpo.hpp"
#include "vidalign/policy.hpp"
#include "vidalign/rng.hpp"
#include "vidalign/tournament.hpp"

namespace vidalign {

// Each flag removes exactly one mechanism; everything else is unchanged.
struct AblationFlags {
  bool warmup = true;  // stage-1 scoring warm-up
  bool tmr = true;     // temporal bonus in stage 2
  bool lcr = true;     // length bonus in stages 2-3
  bool uf = true;      // stage-3 pair refresh plus judge retraining
};

struct Stage1Plan {
  GrpoConfig grpo;
  RewardConfig reward;
  std::vector<AnnotationRecord> dataset;  // image scores
};

struct StageResult {
  ToyPolicy policy;
  TrainingLog log;
  // Periodic copies of the policy along the trajectory; filled only when
  // the plan asks for them (stage 2).
  std::vector<ToyPolicy> snapshots;
};

// Scoring warm-up: format plus score rewards only (no temporal or length
// bonus). warmup=off returns the initial policy untouched.
StageResult run_stage1(const Stage1Plan& plan, const ToyPolicy& policy_init,
                       const AblationFlags& ablations, Rng& rng);

struct TaskMixEntry {
  TaskKind kind = TaskKind::kVideoMultidim;
  double weight = 1.0;
  std::vector<AnnotationRecord> records;
};

struct Stage2Plan {
  GrpoConfig grpo;
  RewardConfig reward;
  std::vector<TaskMixEntry> mix;
  int steps = 600;    // weighted task draws; one group update each
  int n_shuffles = 4; // temporal probe permutations
  // When positive, StageResult.snapshots receives a policy copy every
  // snapshot_every steps. Trajectory-averaged evaluation smooths out the
  // step-to-step noise of single-checkpoint comparisons.
  int snapshot_every = 0;
};

// Interleaved GRPO over the task mix. The temporal bonus applies only to
// single-video tasks; the length bonus applies everywhere when enabled.
// Pair records labeled tie are skipped at sampling time.
StageResult run_stage2(const Stage2Plan& plan, const ToyPolicy& policy_stage1,
                       const AblationFlags& ablations, Rng& rng);

struct Stage3Plan {
  int rounds = 2;
  int pool_size = 10;
  int prompts = 32;  // candidate pools mined per round
  DiffusionSchedule schedule;
  DpoConfig dpo;
  GrpoConfig judge_grpo;  // reuses stage-2 hyperparameters by convention
  RewardConfig reward;
  // Pair subset of the stage-2 data, mixed into judge retraining.
  std::vector<AnnotationRecord> stage2_pairs;
  // Renders a latent as a video the judge can look at.
  std::function<SyntheticVideo(std::span<const double>)> decode;
  // Optional oracle hook for logging win-rates; never used for training.
  std::function<double(std::span<const double>)> oracle_quality;
};

struct Stage3Result {
  ToyGenerator generator;  // final G
  ToyPolicy judge;         // final D
  // Win-rate of each round's output generator against the round's input,
  // measured by oracle_quality when provided (empty otherwise).
  std::vector<double> round_win_rates;
  int refresh_warnings = 0;
};

// Alternating finetuning: mine pairs with the judge, DPO the generator,
// refresh pairs from the improved generator, retrain the judge on the
// refreshed pairs plus stage-2 pair data, then DPO again under the new
// judge. uf=off stops each round after the first DPO pass.
Stage3Result run_stage3(const Stage3Plan& plan, const ToyPolicy& judge_stage2,
                        const ToyGenerator& generator_init,
                        const AblationFlags& ablations, Rng& rng);

// Deterministic comparison verdict of a policy over two decoded latents.
Judge make_policy_judge(
    const ToyPolicy& policy,
    std::function<SyntheticVideo(std::span<const double>)> decode);

}  // namespace vidalign

#endif  // VIDALIGN_CURRICULUM_HPP_
