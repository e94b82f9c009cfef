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
#include <vector>

#include "doctest.h"
#include "vidalign/diffusion.hpp"

namespace {

using namespace vidalign;

TEST_CASE("linear schedule invariants") {
  const DiffusionSchedule s = DiffusionSchedule::linear();
  CHECK(s.timesteps == 50);
  CHECK(s.beta.front() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(s.beta.back() == doctest::Approx(0.02).epsilon(1e-12));

  double prod = 1.0;
  for (int t = 0; t < s.timesteps; ++t) {
    prod *= 1.0 - s.beta[t];
    CHECK(s.alpha_bar[t] == doctest::Approx(prod).epsilon(1e-12));
    CHECK(s.alpha_bar[t] > 0.0);
    CHECK(s.alpha_bar[t] <= 1.0);
    if (t > 0) CHECK(s.alpha_bar[t] < s.alpha_bar[t - 1]);
  }
}

DiffusionSchedule single_step(double alpha_bar) {
  DiffusionSchedule s;
  s.timesteps = 1;
  s.beta = {1.0 - alpha_bar};
  s.alpha_bar = {alpha_bar};
  return s;
}

TEST_CASE("forward noising map") {
  // alpha_bar 0.64: x_t = 0.8 * x0 + 0.6 * eps.
  const std::vector<double> xt = noise_with(
      single_step(0.64), std::vector<double>{1.0}, 0, std::vector<double>{0.5});
  REQUIRE(xt.size() == 1);
  CHECK(xt[0] == doctest::Approx(1.1).epsilon(1e-12));

  const std::vector<double> keep = noise_with(
      single_step(1.0), std::vector<double>{0.7}, 0, std::vector<double>{9.0});
  CHECK(keep[0] == doctest::Approx(0.7).epsilon(1e-12));

  const std::vector<double> all_noise =
      noise_with(single_step(1e-300), std::vector<double>{0.7}, 0,
                 std::vector<double>{-0.3});
  CHECK(all_noise[0] == doctest::Approx(-0.3).epsilon(1e-9));

  Rng rng(3);
  CHECK_THROWS(noise(single_step(0.5), std::vector<double>{1.0}, 1, rng));
  CHECK_THROWS(noise(single_step(0.5), std::vector<double>{1.0}, -1, rng));

  // Reproducible given the rng state.
  const DiffusionSchedule s = DiffusionSchedule::linear();
  Rng r1(5), r2(5);
  const NoiseResult a = noise(s, std::vector<double>{0.2, -0.4}, 7, r1);
  const NoiseResult b = noise(s, std::vector<double>{0.2, -0.4}, 7, r2);
  CHECK(a.x_t == b.x_t);
  CHECK(a.eps == b.eps);
}

TEST_CASE("untrained generator predicts zero noise") {
  Rng init(4);
  const ToyGenerator gen(3, 5, init);
  const DiffusionSchedule s = DiffusionSchedule::linear();
  const std::vector<double> out =
      gen.predict_noise(std::vector<double>{0.4, -1.0, 2.0}, 10, s);
  REQUIRE(out.size() == 3);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("sampling is deterministic and centered when untrained") {
  Rng init(6);
  const ToyGenerator gen(3, 5, init);
  const DiffusionSchedule s = DiffusionSchedule::linear();

  Rng r1(9), r2(9);
  CHECK(generate(gen, s, r1) == generate(gen, s, r2));

  Rng rr(10);
  double mean = 0.0;
  int n = 0;
  for (int i = 0; i < 1000; ++i) {
    for (double v : generate(gen, s, rr)) {
      mean += v;
      ++n;
    }
  }
  CHECK(std::abs(mean / n) < 0.1);
}

TEST_CASE("pretraining on a point mass concentrates samples") {
  Rng init(8);
  ToyGenerator gen(2, 8, init);
  const DiffusionSchedule s = DiffusionSchedule::linear();
  const std::vector<double> target = {1.5, -0.5};

  const auto median_distance = [&](Rng& rng) {
    std::vector<double> d;
    for (int i = 0; i < 200; ++i) {
      const std::vector<double> z = generate(gen, s, rng);
      double sq = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        sq += (z[k] - target[k]) * (z[k] - target[k]);
      }
      d.push_back(std::sqrt(sq));
    }
    std::sort(d.begin(), d.end());
    return d[d.size() / 2];
  };

  Rng e0(11);
  const double before = median_distance(e0);
  std::vector<std::vector<double>> data(64, target);
  Rng tr(12);
  pretrain_generator(gen, s, data, 0.02, 1500, tr);
  Rng e1(11);
  const double after = median_distance(e1);
  CHECK(after < before);
  CHECK(after < 0.75 * before);
}

}  // namespace
