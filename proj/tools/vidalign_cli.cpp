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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vidalign/checkpoint.hpp"
#include "vidalign/config.hpp"
#include "vidalign/curriculum.hpp"
#include "vidalign/data.hpp"
#include "vidalign/metrics.hpp"
#include "vidalign/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace vidalign;

struct Paths {
  fs::path out;
  fs::path image_train() const { return out / "image_train.jsonl"; }
  fs::path image_holdout() const { return out / "image_holdout.jsonl"; }
  fs::path multidim_train() const { return out / "multidim_train.jsonl"; }
  fs::path multidim_holdout() const { return out / "multidim_holdout.jsonl"; }
  fs::path pairs_train() const { return out / "pairs_train.jsonl"; }
  fs::path pairs_holdout() const { return out / "pairs_holdout.jsonl"; }
  fs::path vqa_train() const { return out / "vqa_train.jsonl"; }
  fs::path vqa_holdout() const { return out / "vqa_holdout.jsonl"; }
  fs::path oracle() const { return out / "oracle.jsonl"; }
};

PipelineSettings resolve_settings(const std::string& config_path) {
  const IniFile ini = config_path.empty() ? IniFile::parse_string("")
                                          : IniFile::parse_file(config_path);
  return load_settings(ini);
}

void write_run_log(const Paths& paths, const std::string& subcommand,
                   std::uint64_t seed, const PipelineSettings& s) {
  fs::create_directories(paths.out);
  std::ofstream log(paths.out / (subcommand + "_run.log"));
  log << "subcommand=" << subcommand << "\n";
  log << "seed=" << seed << "\n";
  log << "config_hash=" << s.config_hash << "\n";
  log << s.resolved;
}

void write_training_log(const fs::path& path, const TrainingLog& log) {
  std::ofstream out(path);
  for (const TrainingLogRow& row : log.rows) {
    nlohmann::json j;
    j["step"] = row.step;
    j["query_id"] = row.query_id;
    j["mean_reward"] = row.mean_reward;
    j["loss"] = row.loss;
    j["format_rate"] = row.format_rate;
    j["mean_len"] = row.mean_len;
    out << j.dump() << "\n";
  }
}

void save_stage_checkpoint(const Paths& paths, const std::string& stage,
                           int step, const ParamVector& params,
                           std::uint64_t hash) {
  save_checkpoint((paths.out / (stage + "-" + std::to_string(step) + ".ckpt"))
                      .string(),
                  params, hash);
  save_checkpoint((paths.out / (stage + "-final.ckpt")).string(), params,
                  hash);
}

int cmd_gen_data(const PipelineSettings& s, const Paths& paths,
                 std::uint64_t seed) {
  const SyntheticWorld world = SyntheticWorld::create(s.world, s.world_seed);
  Rng rng(seed);
  const GeneratedData data = gen_synthetic(world, rng);

  fs::create_directories(paths.out);
  save_dataset(paths.image_train().string(),
               train_split(data.image, s.world.n_image_holdout));
  save_dataset(paths.image_holdout().string(),
               holdout_split(data.image, s.world.n_image_holdout));
  save_dataset(paths.multidim_train().string(),
               train_split(data.multidim, s.world.n_multidim_holdout));
  save_dataset(paths.multidim_holdout().string(),
               holdout_split(data.multidim, s.world.n_multidim_holdout));
  save_dataset(paths.pairs_train().string(),
               train_split(data.pairs, s.world.n_pairs_holdout));
  save_dataset(paths.pairs_holdout().string(),
               holdout_split(data.pairs, s.world.n_pairs_holdout));
  save_dataset(paths.vqa_train().string(),
               train_split(data.vqa, s.world.n_vqa_holdout));
  save_dataset(paths.vqa_holdout().string(),
               holdout_split(data.vqa, s.world.n_vqa_holdout));
  save_oracle(paths.oracle().string(), data.oracle);
  std::cout << "wrote datasets to " << paths.out.string() << "\n";
  return 0;
}

int cmd_stage1(const PipelineSettings& s, const Paths& paths,
               std::uint64_t seed) {
  Stage1Plan plan;
  plan.grpo = s.stage1_grpo;
  plan.reward = s.reward;
  plan.dataset = load_dataset(paths.image_train().string(),
                              TaskKind::kImageScore)
                     .records;

  Rng init_rng(seed);
  const ToyPolicy init(s.arch, init_rng);
  Rng rng = init_rng.fork(1);
  const StageResult result = run_stage1(plan, init, s.ablations, rng);

  save_stage_checkpoint(paths, "stage1",
                        static_cast<int>(result.log.rows.size()),
                        result.policy.params(), s.config_hash);
  write_training_log(paths.out / "stage1_log.jsonl", result.log);
  std::cout << "stage1 done: " << result.log.rows.size() << " steps\n";
  return 0;
}

int cmd_stage2(const PipelineSettings& s, const Paths& paths,
               std::uint64_t seed) {
  const ToyPolicy stage1 = policy_from_params(
      s.arch, load_checkpoint((paths.out / "stage1-final.ckpt").string(),
                              s.config_hash));

  Stage2Plan plan;
  plan.grpo = s.stage2_grpo;
  plan.reward = s.reward;
  plan.steps = s.stage2_steps;
  plan.n_shuffles = s.n_shuffles;
  plan.mix.push_back({TaskKind::kVideoMultidim, s.mix_multidim,
                      load_dataset(paths.multidim_train().string(),
                                   TaskKind::kVideoMultidim)
                          .records});
  plan.mix.push_back({TaskKind::kPairCompare, s.mix_pairs,
                      load_dataset(paths.pairs_train().string(),
                                   TaskKind::kPairCompare)
                          .records});
  plan.mix.push_back(
      {TaskKind::kVqa, s.mix_vqa,
       load_dataset(paths.vqa_train().string(), TaskKind::kVqa).records});

  Rng rng(seed);
  const StageResult result = run_stage2(plan, stage1, s.ablations, rng);

  save_stage_checkpoint(paths, "stage2",
                        static_cast<int>(result.log.rows.size()),
                        result.policy.params(), s.config_hash);
  write_training_log(paths.out / "stage2_log.jsonl", result.log);
  std::cout << "stage2 done: " << result.log.rows.size() << " steps\n";
  return 0;
}

int cmd_stage3(const PipelineSettings& s, const Paths& paths,
               std::uint64_t seed) {
  const ToyPolicy judge = policy_from_params(
      s.arch, load_checkpoint((paths.out / "stage2-final.ckpt").string(),
                              s.config_hash));
  const SyntheticWorld world = SyntheticWorld::create(s.world, s.world_seed);

  Stage3Plan plan;
  plan.rounds = s.stage3_rounds;
  plan.pool_size = s.stage3_pool_size;
  plan.prompts = s.stage3_prompts;
  plan.schedule = DiffusionSchedule::linear();
  plan.dpo = s.dpo;
  plan.judge_grpo = s.judge_grpo;
  plan.reward = s.reward;
  plan.stage2_pairs =
      load_dataset(paths.pairs_train().string(), TaskKind::kPairCompare)
          .records;
  plan.decode = [world](std::span<const double> z) {
    return world.decode_latent(z);
  };
  // The hidden oracle is never consulted by training subcommands; win
  // rates are measured by `eval` and the acceptance suite.

  Rng rng(seed);
  ToyGenerator generator(s.world.feat_dim, s.gen_hidden_dim, rng);
  std::vector<std::vector<double>> base_latents;
  for (int i = 0; i < 256; ++i) {
    std::vector<double> z(static_cast<std::size_t>(s.world.feat_dim));
    for (double& x : z) x = rng.normal();
    base_latents.push_back(std::move(z));
  }
  pretrain_generator(generator, plan.schedule, base_latents, s.gen_pretrain_lr,
                     s.gen_pretrain_steps, rng);
  save_checkpoint((paths.out / "stage3-gen-init.ckpt").string(),
                  generator.params(), s.config_hash);

  const Stage3Result result =
      run_stage3(plan, judge, generator, s.ablations, rng);

  save_stage_checkpoint(paths, "stage3-judge", plan.rounds,
                        result.judge.params(), s.config_hash);
  save_stage_checkpoint(paths, "stage3-gen", plan.rounds,
                        result.generator.params(), s.config_hash);
  std::cout << "stage3 done: " << plan.rounds << " rounds, "
            << result.refresh_warnings << " refresh warnings\n";
  return 0;
}

int cmd_eval(const PipelineSettings& s, const Paths& paths,
             const std::string& checkpoint) {
  const std::string ckpt_path =
      checkpoint.empty() ? (paths.out / "stage2-final.ckpt").string()
                         : checkpoint;
  const ToyPolicy policy =
      policy_from_params(s.arch, load_checkpoint(ckpt_path, s.config_hash));

  const auto oracle = load_oracle(paths.oracle().string());
  const auto image =
      load_dataset(paths.image_holdout().string(), TaskKind::kImageScore)
          .records;
  MetricReport report = score_eval(policy, image, oracle);

  const auto pairs_holdout =
      load_dataset(paths.pairs_holdout().string(), TaskKind::kPairCompare)
          .records;
  const auto pairs_train =
      load_dataset(paths.pairs_train().string(), TaskKind::kPairCompare)
          .records;
  const auto eval_records = pair_eval_records(policy, pairs_holdout);
  const auto calib_records = pair_eval_records(policy, pairs_train);
  report.n_pairs = static_cast<int>(eval_records.size());
  report.diff =
      preference_accuracy(eval_records, PreferenceMode::kDiff);
  report.tau =
      preference_accuracy(eval_records, PreferenceMode::kTau, calib_records);

  std::cout << format_metric_report(report);
  return 0;
}

int cmd_gradcheck(std::uint64_t seed) {
  const double grpo_err = grpo_gradcheck_max_error(100, seed);
  const double dpo_err = dpo_gradcheck_max_error(100, seed + 1);
  std::cout << "grpo_max_rel_error=" << grpo_err << "\n";
  std::cout << "dpo_max_rel_error=" << dpo_err << "\n";
  if (grpo_err >= 1e-4 || dpo_err >= 1e-4) {
    std::cerr << "gradient check failed tolerance 1e-4\n";
    return 2;
  }
  return 0;
}

int cmd_report(const std::string& log_path) {
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open training log: " << log_path << "\n";
    return 1;
  }
  std::string line;
  int rows = 0;
  double first_reward = 0.0, last_reward = 0.0;
  double last_format = 0.0, last_len = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    if (rows == 0) first_reward = j.at("mean_reward").get<double>();
    last_reward = j.at("mean_reward").get<double>();
    last_format = j.at("format_rate").get<double>();
    last_len = j.at("mean_len").get<double>();
    ++rows;
  }
  std::cout << "steps=" << rows << "\n";
  std::cout << "first_mean_reward=" << first_reward << "\n";
  std::cout << "last_mean_reward=" << last_reward << "\n";
  std::cout << "last_format_rate=" << last_format << "\n";
  std::cout << "last_mean_len=" << last_len << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale video-quality alignment pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1234;
  app.add_option("--config", config_path, "INI-style configuration file");
  app.add_option("--seed", seed, "Run seed");
  app.add_option("--out", out_dir, "Output directory");

  auto* c_gen = app.add_subcommand("gen-data", "Generate synthetic datasets");
  auto* c_s1 = app.add_subcommand("stage1", "Scoring warm-up training");
  auto* c_s2 = app.add_subcommand("stage2", "Task-mix temporal training");
  auto* c_s3 = app.add_subcommand("stage3", "Alternating generator/judge finetuning");
  auto* c_eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  std::string checkpoint;
  c_eval->add_option("--checkpoint", checkpoint,
                     "Checkpoint path (default: stage2-final in --out)");
  auto* c_grad = app.add_subcommand("gradcheck", "Finite-difference suites");
  auto* c_rep = app.add_subcommand("report", "Summarize a training log");
  std::string log_path;
  c_rep->add_option("--log", log_path, "Training log path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Paths paths{fs::path(out_dir)};
    if (c_rep->parsed()) return cmd_report(log_path);
    if (c_grad->parsed()) {
      std::cout << "seed=" << seed << "\n";
      return cmd_gradcheck(seed);
    }

    const PipelineSettings settings = resolve_settings(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    write_run_log(paths, sub, seed, settings);

    if (c_gen->parsed()) return cmd_gen_data(settings, paths, seed);
    if (c_s1->parsed()) return cmd_stage1(settings, paths, seed);
    if (c_s2->parsed()) return cmd_stage2(settings, paths, seed);
    if (c_s3->parsed()) return cmd_stage3(settings, paths, seed);
    if (c_eval->parsed()) return cmd_eval(settings, paths, checkpoint);
    std::cerr << "unknown subcommand\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
