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

#include "vidalign/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "vidalign/checkpoint.hpp"
#include "vidalign/diffusion.hpp"
#include "vidalign/dpo.hpp"

namespace vidalign {

PipelineSettings load_settings(const IniFile& ini) {
  PipelineSettings s;

  s.world_seed = ini.get_u64("data", "world_seed", s.world_seed);
  s.world.feat_dim = ini.get_int("data", "feat_dim", s.world.feat_dim);
  s.world.prompt_dim = ini.get_int("data", "prompt_dim", s.world.prompt_dim);
  s.world.frames = ini.get_int("data", "frames", s.world.frames);
  s.world.n_image = ini.get_int("data", "n_image", s.world.n_image);
  s.world.n_image_holdout =
      ini.get_int("data", "n_image_holdout", s.world.n_image_holdout);
  s.world.n_multidim = ini.get_int("data", "n_multidim", s.world.n_multidim);
  s.world.n_multidim_holdout =
      ini.get_int("data", "n_multidim_holdout", s.world.n_multidim_holdout);
  s.world.n_pairs = ini.get_int("data", "n_pairs", s.world.n_pairs);
  s.world.n_pairs_holdout =
      ini.get_int("data", "n_pairs_holdout", s.world.n_pairs_holdout);
  s.world.n_vqa = ini.get_int("data", "n_vqa", s.world.n_vqa);
  s.world.n_vqa_holdout =
      ini.get_int("data", "n_vqa_holdout", s.world.n_vqa_holdout);
  s.world.tie_margin = ini.get_double("data", "tie_margin", s.world.tie_margin);
  s.world.annotator_offset =
      ini.get_double("data", "annotator_offset", s.world.annotator_offset);
  s.world.annotator_scale_jitter = ini.get_double(
      "data", "annotator_scale_jitter", s.world.annotator_scale_jitter);
  s.world.annotator_noise =
      ini.get_double("data", "annotator_noise", s.world.annotator_noise);
  s.world.vqa_label_noise =
      ini.get_double("data", "vqa_label_noise", s.world.vqa_label_noise);
  s.world.temporal_label_noise = ini.get_double(
      "data", "temporal_label_noise", s.world.temporal_label_noise);
  s.world.n_annotators =
      ini.get_int("data", "n_annotators", s.world.n_annotators);

  s.arch.feat_dim = s.world.feat_dim;
  s.arch.prompt_dim = s.world.prompt_dim;
  s.arch.max_frames = s.world.frames;
  s.arch.hidden_dim = ini.get_int("policy", "hidden_dim", s.arch.hidden_dim);
  s.arch.score_bins = ini.get_int("policy", "score_bins", s.arch.score_bins);
  s.arch.malformed_rate =
      ini.get_double("policy", "malformed_rate", s.arch.malformed_rate);

  s.reward.alpha = ini.get_double("reward", "alpha", s.reward.alpha);
  s.reward.mu = ini.get_double("reward", "mu", s.reward.mu);
  s.reward.gamma = ini.get_double("reward", "gamma", s.reward.gamma);
  s.reward.l_min = ini.get_int("reward", "l_min", s.reward.l_min);
  s.reward.l_max = ini.get_int("reward", "l_max", s.reward.l_max);
  s.reward.format_weight =
      ini.get_double("reward", "format_weight", s.reward.format_weight);

  s.ablations.warmup = ini.get_bool("ablations", "warmup", s.ablations.warmup);
  s.ablations.tmr = ini.get_bool("ablations", "tmr", s.ablations.tmr);
  s.ablations.lcr = ini.get_bool("ablations", "lcr", s.ablations.lcr);
  s.ablations.uf = ini.get_bool("ablations", "uf", s.ablations.uf);

  const auto load_grpo = [&](const std::string& section, GrpoConfig base,
                             double default_lr) {
    GrpoConfig g = base;
    g.group_size = ini.get_int(section, "group_size", g.group_size);
    g.clip_delta = ini.get_double(section, "clip_delta", g.clip_delta);
    g.kl_beta = ini.get_double(section, "kl_beta", g.kl_beta);
    g.epochs = ini.get_int(section, "epochs", g.epochs);
    g.learning_rate = ini.get_double(section, "learning_rate", default_lr);
    return g;
  };
  // The published 1e-6 rate is sized for a 7B model; these nets have a
  // few hundred parameters and need a proportionally larger step.
  s.stage1_grpo = load_grpo("stage1", GrpoConfig{}, 0.1);
  s.stage2_grpo = load_grpo("stage2", GrpoConfig{}, 0.1);
  s.judge_grpo = load_grpo("stage3_judge", GrpoConfig{}, 0.1);
  s.judge_grpo.epochs = ini.get_int("stage3_judge", "epochs", 1);

  s.mix_multidim = ini.get_double("stage2", "mix_multidim", s.mix_multidim);
  s.mix_pairs = ini.get_double("stage2", "mix_pairs", s.mix_pairs);
  s.mix_vqa = ini.get_double("stage2", "mix_vqa", s.mix_vqa);
  s.stage2_steps = ini.get_int("stage2", "steps", s.stage2_steps);
  s.n_shuffles = ini.get_int("stage2", "n_shuffles", s.n_shuffles);

  s.stage3_rounds = ini.get_int("stage3", "rounds", s.stage3_rounds);
  s.stage3_pool_size = ini.get_int("stage3", "pool_size", s.stage3_pool_size);
  s.stage3_prompts = ini.get_int("stage3", "prompts", s.stage3_prompts);
  s.gen_hidden_dim = ini.get_int("stage3", "gen_hidden_dim", s.gen_hidden_dim);
  s.gen_pretrain_steps =
      ini.get_int("stage3", "gen_pretrain_steps", s.gen_pretrain_steps);
  s.gen_pretrain_lr =
      ini.get_double("stage3", "gen_pretrain_lr", s.gen_pretrain_lr);
  s.dpo.weight_const = ini.get_double("dpo", "weight_const", s.dpo.weight_const);
  s.dpo.learning_rate =
      ini.get_double("dpo", "learning_rate", s.dpo.learning_rate);
  s.dpo.steps = ini.get_int("dpo", "steps", s.dpo.steps);
  s.dpo.minibatch = ini.get_int("dpo", "minibatch", s.dpo.minibatch);
  s.dpo.max_grad_norm =
      ini.get_double("dpo", "max_grad_norm", s.dpo.max_grad_norm);

  s.resolved = ini.dump_resolved();
  s.config_hash = fnv1a_hash(s.resolved);
  return s;
}

ToyPolicy policy_from_params(const PolicyArch& arch,
                             const ParamVector& loaded) {
  Rng scratch(0);
  ToyPolicy policy(arch, scratch);
  if (policy.params().size() != loaded.size()) {
    throw std::invalid_argument(
        "checkpoint parameter count does not match the policy architecture");
  }
  const auto& have = policy.params().segments();
  const auto& want = loaded.segments();
  if (have.size() != want.size()) {
    throw std::invalid_argument("checkpoint segment table mismatch");
  }
  for (std::size_t i = 0; i < have.size(); ++i) {
    if (have[i].name != want[i].name || have[i].rows != want[i].rows ||
        have[i].cols != want[i].cols) {
      throw std::invalid_argument("checkpoint segment mismatch: " +
                                  want[i].name);
    }
  }
  policy.params().values() = loaded.values();
  return policy;
}

MetricReport score_eval(const ToyPolicy& policy,
                        std::span<const AnnotationRecord> records,
                        std::span<const OracleRow> oracle) {
  std::unordered_map<std::string, double> truth;
  for (const OracleRow& row : oracle) {
    if (!row.truth.empty()) truth[row.id] = row.truth[0];
  }
  std::vector<double> pred;
  std::vector<double> gt;
  for (const AnnotationRecord& r : records) {
    if (!is_single_video_task(r.kind)) continue;
    const auto it = truth.find(r.id);
    if (it == truth.end()) continue;
    pred.push_back(policy.expected_score(r.video));
    gt.push_back(it->second);
  }
  if (pred.size() < 2) {
    throw std::invalid_argument("score_eval: fewer than 2 matched records");
  }
  MetricReport report;
  report.n_scored = static_cast<int>(pred.size());
  report.plcc = plcc(pred, gt);
  report.srcc = srcc(pred, gt);
  report.krcc = krcc(pred, gt);
  return report;
}

std::vector<PairEvalRecord> pair_eval_records(
    const ToyPolicy& policy, std::span<const AnnotationRecord> pairs) {
  std::vector<PairEvalRecord> out;
  for (const AnnotationRecord& r : pairs) {
    if (r.kind != TaskKind::kPairCompare) continue;
    PairEvalRecord e;
    e.pred_score_a = policy.choice_prob_a(r.video, r.video_b);
    e.pred_score_b = 1.0 - e.pred_score_a;
    e.gt_label = r.pair_label;
    out.push_back(e);
  }
  return out;
}

namespace {

SyntheticVideo random_probe_video(int frames, int feat_dim, int prompt_dim,
                                  Rng& rng) {
  SyntheticVideo v;
  for (int t = 0; t < frames; ++t) {
    std::vector<double> f(static_cast<std::size_t>(feat_dim));
    for (double& x : f) x = rng.uniform(-1.0, 1.0);
    v.frames.push_back(std::move(f));
  }
  v.prompt_features.resize(static_cast<std::size_t>(prompt_dim));
  for (double& x : v.prompt_features) x = rng.uniform(-1.0, 1.0);
  return v;
}

AnnotationRecord random_probe_record(const PolicyArch& arch, int index,
                                     Rng& rng) {
  static const TaskKind kKinds[] = {
      TaskKind::kImageScore, TaskKind::kNaturalVideoScore,
      TaskKind::kVideoMultidim, TaskKind::kPairCompare, TaskKind::kVqa};
  AnnotationRecord r;
  r.id = "probe-" + std::to_string(index);
  r.kind = kKinds[index % 5];
  const int frames = r.kind == TaskKind::kImageScore ? 2 : arch.max_frames;
  r.video = random_probe_video(frames, arch.feat_dim, arch.prompt_dim, rng);
  switch (r.kind) {
    case TaskKind::kImageScore:
    case TaskKind::kNaturalVideoScore:
      r.mos = rng.uniform();
      break;
    case TaskKind::kVideoMultidim:
      for (int j = 0; j < arch.multi_dims; ++j) r.mos_multi.push_back(rng.uniform());
      break;
    case TaskKind::kPairCompare:
      r.video_b =
          random_probe_video(frames, arch.feat_dim, arch.prompt_dim, rng);
      r.pair_label = rng.uniform() < 0.5 ? PairLabel::kA : PairLabel::kB;
      break;
    case TaskKind::kVqa:
      r.question_id = "probe-q";
      r.vqa_answer_yes = rng.uniform() < 0.5;
      break;
  }
  return r;
}

}  // namespace

double grpo_gradcheck_max_error(int n_configs, std::uint64_t seed) {
  Rng rng(seed);
  PolicyArch arch;
  arch.feat_dim = 3;
  arch.prompt_dim = 2;
  arch.hidden_dim = 4;
  arch.max_frames = 3;
  arch.score_bins = 5;

  double worst = 0.0;
  for (int i = 0; i < n_configs; ++i) {
    ToyPolicy policy(arch, rng);
    // Detach from the symmetric init so head gradients are nontrivial.
    for (double& p : policy.params().values()) p += 0.3 * rng.normal();
    ToyPolicy ref = policy;
    for (double& p : ref.params().values()) p += 0.1 * rng.normal();

    GrpoConfig cfg;
    cfg.group_size = 4;
    cfg.clip_delta = 0.1 + 0.3 * rng.uniform();
    cfg.kl_beta = 0.01 * rng.uniform();

    const AnnotationRecord record = random_probe_record(arch, i, rng);
    const StageOptions options{/*tmr=*/false, /*lcr=*/true, 2};
    const RewardConfig reward_cfg;
    const RolloutGroup group =
        rollout_group(record, policy, ref, cfg, reward_cfg, options, rng);
    // Evaluate at parameters shifted off the sampling point so the ratio
    // is not pinned at 1.
    ToyPolicy eval_policy = policy;
    for (double& p : eval_policy.params().values()) p += 0.05 * rng.normal();

    const LossBuilder builder =
        make_grpo_loss_builder(eval_policy, record, group, cfg);
    const GradResult g = grad(builder, eval_policy.params());
    const std::vector<double> fd =
        finite_diff(builder, eval_policy.params(), 1e-5);
    worst = std::max(worst, max_rel_error(g.grad, fd));
  }
  return worst;
}

double dpo_gradcheck_max_error(int n_configs, std::uint64_t seed) {
  Rng rng(seed);
  const int latent_dim = 3;
  const DiffusionSchedule schedule = DiffusionSchedule::linear();

  double worst = 0.0;
  for (int i = 0; i < n_configs; ++i) {
    ToyGenerator gen_theta(latent_dim, 4, rng);
    for (double& p : gen_theta.params().values()) p += 0.2 * rng.normal();
    ToyGenerator gen_ref(latent_dim, 4, rng);
    for (double& p : gen_ref.params().values()) p += 0.2 * rng.normal();

    WinLosePair pair;
    pair.prompt_id = "probe";
    pair.winner.resize(latent_dim);
    pair.loser.resize(latent_dim);
    for (double& x : pair.winner) x = rng.normal();
    for (double& x : pair.loser) x = rng.normal();

    const int t = rng.uniform_int(schedule.timesteps);
    std::vector<double> eps_w(latent_dim), eps_l(latent_dim);
    for (double& x : eps_w) x = rng.normal();
    for (double& x : eps_l) x = rng.normal();

    DpoConfig cfg;
    cfg.weight_const = 0.5 + rng.uniform();

    const LossBuilder builder = [&](Tape&, std::span<const Var> p) -> Var {
      return dpo_loss_tape(p, gen_theta, gen_ref, pair, schedule, t, eps_w,
                           eps_l, cfg);
    };
    const GradResult g = grad(builder, gen_theta.params());
    const std::vector<double> fd =
        finite_diff(builder, gen_theta.params(), 1e-5);
    worst = std::max(worst, max_rel_error(g.grad, fd));
  }
  return worst;
}

}  // namespace vidalign
