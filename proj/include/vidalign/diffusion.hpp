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

#ifndef VIDALIGN_DIFFUSION_HPP_
#define VIDALIGN_DIFFUSION_HPP_

#include <span>
#include <vector>

#include "vidalign/numkit.hpp"
#include "vidalign/param_vector.hpp"
#include "vidalign/rng.hpp"
#include "vidalign/tape.hpp"

namespace vidalign {

// Linear-beta forward process; alpha_bar is the cumulative product of
// (1 - beta) and strictly decreasing in (0, 1].
struct DiffusionSchedule {
  int timesteps = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;

  static DiffusionSchedule linear(int timesteps = 50, double beta_start = 1e-4,
                                  double beta_end = 0.02);
};

struct NoiseResult {
  std::vector<double> x_t;
  std::vector<double> eps;
};

// x_t = sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps; returns the drawn
// eps alongside, as the preference loss needs it.
NoiseResult noise(const DiffusionSchedule& schedule,
                  std::span<const double> x0, int t, Rng& rng);
// Same forward map with a caller-supplied eps.
std::vector<double> noise_with(const DiffusionSchedule& schedule,
                               std::span<const double> x0, int t,
                               std::span<const double> eps);

// Small noise-prediction MLP: [x_t ; t/T] -> tanh hidden -> predicted eps.
// The output layer starts at zero, so an untrained generator predicts the
// zero vector.
class ToyGenerator {
 public:
  ToyGenerator(int latent_dim, int hidden_dim, Rng& init_rng);

  int latent_dim() const { return latent_dim_; }
  ParamVector& params() { return params_; }
  const ParamVector& params() const { return params_; }

  std::vector<double> predict_noise(std::span<const double> x_t, int t,
                                    const DiffusionSchedule& schedule) const;
  std::vector<Var> predict_noise_tape(std::span<const Var> param_vars,
                                      std::span<const double> x_t, int t,
                                      const DiffusionSchedule& schedule) const;

 private:
  int latent_dim_;
  int hidden_dim_;
  ParamVector params_;
};

// Ancestral reverse-process sampling from pure noise; deterministic given
// the rng state.
std::vector<double> generate(const ToyGenerator& generator,
                             const DiffusionSchedule& schedule, Rng& rng);

// Standard denoising pretraining (predict eps, squared error), used to fit
// the initial generator to a base latent distribution.
void pretrain_generator(ToyGenerator& generator,
                        const DiffusionSchedule& schedule,
                        std::span<const std::vector<double>> data,
                        double learning_rate, int steps, Rng& rng);

}  // namespace vidalign

#endif  // VIDALIGN_DIFFUSION_HPP_
