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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "vidalign/data.hpp"
#include "vidalign/grpo.hpp"
#include "vidalign/pipeline.hpp"

namespace {

using namespace vidalign;

TEST_CASE("advantage examples") {
  const std::vector<double> two = advantages(std::vector<double>{0.0, 1.0}, 1e-8);
  CHECK(two[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> flat =
      advantages(std::vector<double>(8, 0.7), 1e-8);
  for (double a : flat) CHECK(a == 0.0);

  const std::vector<double> four =
      advantages(std::vector<double>{1.0, 2.0, 3.0, 4.0}, 1e-8);
  CHECK(four[0] == doctest::Approx(-1.3416).epsilon(1e-4));
  CHECK(four[1] == doctest::Approx(-0.4472).epsilon(1e-4));
  CHECK(four[2] == doctest::Approx(0.4472).epsilon(1e-4));
  CHECK(four[3] == doctest::Approx(1.3416).epsilon(1e-4));

  CHECK_THROWS(advantages(std::vector<double>{1.0}, 1e-8));
}

TEST_CASE("advantage fuzzing: zero mean, unit std, affine invariance") {
  Rng rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + rng.uniform_int(15);
    std::vector<double> r(n);
    for (double& x : r) x = rng.uniform(-5.0, 5.0);
    const std::vector<double> a = advantages(r, 1e-8);

    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    double sq = 0.0;
    for (double x : a) sq += x * x;
    const bool degenerate =
        std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
    if (!degenerate) {
      CHECK(std::abs(sum) < 1e-9);
      CHECK(std::abs(std::sqrt(sq / n) - 1.0) < 1e-9);
    }

    // Shift and positive scaling leave the advantages unchanged.
    const double c = rng.uniform(-10.0, 10.0);
    const double s = rng.uniform(0.1, 10.0);
    std::vector<double> shifted(r), scaled(r);
    for (double& x : shifted) x += c;
    for (double& x : scaled) x *= s;
    const std::vector<double> a_shift = advantages(shifted, 1e-8);
    const std::vector<double> a_scale = advantages(scaled, 1e-8);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(a_shift[i] - a[i]) < 1e-9);
      CHECK(std::abs(a_scale[i] - a[i]) < 1e-9);
    }
  }
}

TEST_CASE("ratio, clipped term, kl penalty") {
  CHECK(ratio(-1.5, -1.5) == 1.0);
  CHECK(ratio(std::log(2.0) - 1.0, -1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ratio(-std::log(4.0), 0.0) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK(clipped_term(1.5, 1.0, 0.2) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(clipped_term(1.5, -1.0, 0.2) == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(clipped_term(1.0, 2.0, 0.2) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(kl_penalty(-1.0, -1.0) == 0.0);
  CHECK(kl_penalty(-std::log(2.0), 0.0) ==
        doctest::Approx(2.0 - std::log(2.0) - 1.0).epsilon(1e-12));

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double rho = rng.uniform(0.0, 3.0);
    const double adv = rng.uniform(-2.0, 2.0);
    CHECK(clipped_term(rho, adv, 0.2) <= rho * adv + 1e-15);
    CHECK(kl_penalty(rng.uniform(-3.0, 0.0), rng.uniform(-3.0, 0.0)) >= 0.0);
  }
}

RolloutGroup identity_group(std::span<const double> advs) {
  RolloutGroup g;
  g.query_id = "q";
  for (double a : advs) {
    g.completions.push_back({});
    g.rewards.push_back(0.0);
    g.logp_old.push_back(-1.0);
    g.logp_ref.push_back(-1.0);
    g.advantages.push_back(a);
  }
  return g;
}

TEST_CASE("grpo loss at the reference point") {
  const GrpoConfig cfg;
  const std::vector<double> logp_new = {-1.0, -1.0};

  const RolloutGroup zero = identity_group(std::vector<double>{0.0, 0.0});
  CHECK(grpo_loss_value(logp_new, zero, cfg) == 0.0);

  const RolloutGroup pm = identity_group(std::vector<double>{-1.0, 1.0});
  CHECK(grpo_loss_value(logp_new, pm, cfg) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("grpo gradient matches finite differences on sampled configs") {
  CHECK(grpo_gradcheck_max_error(10, 21) < 1e-4);
}

TEST_CASE("zero learning rate leaves the policy unchanged") {
  PolicyArch arch;
  arch.feat_dim = 4;
  arch.prompt_dim = 2;
  arch.hidden_dim = 6;
  arch.max_frames = 4;
  Rng init(11);
  ToyPolicy policy(arch, init);
  const std::vector<double> before = policy.params().values();
  const ToyPolicy ref = policy;

  WorldConfig wc;
  wc.feat_dim = 4;
  wc.prompt_dim = 2;
  wc.frames = 4;
  const SyntheticWorld world = SyntheticWorld::create(wc, 5);
  Rng vr(6);
  AnnotationRecord rec;
  rec.id = "img0";
  rec.kind = TaskKind::kImageScore;
  rec.video = world.random_image(vr);
  rec.mos = 0.4;

  GrpoConfig cfg;
  cfg.group_size = 2;
  cfg.epochs = 1;
  cfg.learning_rate = 0.0;
  RewardConfig rcfg;
  StageOptions opt;
  Rng rng(9);
  train_stage(std::vector<AnnotationRecord>{rec}, policy, ref, cfg, rcfg, opt,
              rng);
  CHECK(policy.params().values() == before);
}

}  // namespace
