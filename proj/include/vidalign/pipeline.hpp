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

#ifndef VIDALIGN_PIPELINE_HPP_
#define VIDALIGN_PIPELINE_HPP_

#include <cstdint>
#include <string>

#include "vidalign/config.hpp"
#include "vidalign/curriculum.hpp"
#include "vidalign/data.hpp"
#include "vidalign/grpo.hpp"
#include "vidalign/metrics.hpp"
#include "vidalign/policy.hpp"

namespace vidalign {

// Everything a run needs, resolved from config-file values over built-in
// defaults. `resolved` is the loggable flat dump and `config_hash` its
// fingerprint, embedded in checkpoints.
struct PipelineSettings {
  WorldConfig world;
  std::uint64_t world_seed = 7;
  PolicyArch arch;
  RewardConfig reward;
  AblationFlags ablations;

  GrpoConfig stage1_grpo;
  GrpoConfig stage2_grpo;

  double mix_multidim = 1.0;
  double mix_pairs = 1.0;
  double mix_vqa = 0.5;
  int stage2_steps = 600;
  int n_shuffles = 4;

  int stage3_rounds = 2;
  int stage3_pool_size = 10;
  int stage3_prompts = 32;
  int gen_hidden_dim = 16;
  int gen_pretrain_steps = 2000;
  double gen_pretrain_lr = 0.02;
  DpoConfig dpo;
  GrpoConfig judge_grpo;

  std::string resolved;
  std::uint64_t config_hash = 0;
};

PipelineSettings load_settings(const IniFile& ini);

// Policy whose parameter values come from a checkpoint; the layout must
// match what ToyPolicy(arch) builds.
ToyPolicy policy_from_params(const PolicyArch& arch, const ParamVector& loaded);

// Scoring metrics of a policy against oracle qualities on single-video
// records (oracle truth[0] per matching id).
MetricReport score_eval(const ToyPolicy& policy,
                        std::span<const AnnotationRecord> records,
                        std::span<const OracleRow> oracle);

// Preference records (policy scores both sides; gt from annotations).
std::vector<PairEvalRecord> pair_eval_records(
    const ToyPolicy& policy, std::span<const AnnotationRecord> pairs);

// Finite-difference oracle suites over randomized configurations; each
// returns the worst relative error seen. Used by `gradcheck` and the
// acceptance tests.
double grpo_gradcheck_max_error(int n_configs, std::uint64_t seed);
double dpo_gradcheck_max_error(int n_configs, std::uint64_t seed);

}  // namespace vidalign

#endif  // VIDALIGN_PIPELINE_HPP_
