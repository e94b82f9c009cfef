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

#ifndef VIDALIGN_DPO_HPP_
#define VIDALIGN_DPO_HPP_

#include <span>
#include <string>
#include <vector>

#include "vidalign/diffusion.hpp"
#include "vidalign/numkit.hpp"
#include "vidalign/rng.hpp"

namespace vidalign {

struct WinLosePair {
  enum class Provenance { kInitialC, kRefreshedCHat };

  std::vector<double> winner;
  std::vector<double> loser;
  std::string prompt_id;
  Provenance provenance = Provenance::kInitialC;
};

struct DpoConfig {
  // Constant stand-in for the SNR-dependent weighting; an SNR-aware
  // schedule can be swapped in behind this knob.
  double weight_const = 1.0;
  double learning_rate = 0.005;
  int steps = 150;
  int minibatch = 8;
  // Cap on the minibatch gradient norm. The squared-error terms grow with
  // the latent scale, so an uncapped step can run away across rounds.
  double max_grad_norm = 5.0;
};

// Signed preference margin of the finetuned generator over the reference
// on one (pair, t, eps) draw: positive when theta fits the winner's noise
// better and the loser's worse than the reference does. The loss is
// -log sigma(margin * weight_const); antisymmetric under winner/loser swap.
double dpo_inner_margin(const ToyGenerator& gen_theta,
                        const ToyGenerator& gen_ref, const WinLosePair& pair,
                        const DiffusionSchedule& schedule, int t,
                        std::span<const double> eps_w,
                        std::span<const double> eps_l);

double dpo_loss(const ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                const WinLosePair& pair, const DiffusionSchedule& schedule,
                int t, std::span<const double> eps_w,
                std::span<const double> eps_l, const DpoConfig& cfg);

// Same loss as a differentiable expression in gen_theta's parameters; the
// reference branch is evaluated outside the tape and enters as constants.
Var dpo_loss_tape(std::span<const Var> theta_vars,
                  const ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                  const WinLosePair& pair, const DiffusionSchedule& schedule,
                  int t, std::span<const double> eps_w,
                  std::span<const double> eps_l, const DpoConfig& cfg);

struct DpoTrace {
  std::vector<double> losses;        // per-step minibatch mean loss
  std::vector<double> mean_margins;  // per-step mean implicit margin
};

// Minibatch gradient descent on the mean preference loss; timesteps are
// uniform draws and winner/loser noises are drawn independently.
// gen_ref is untouched.
DpoTrace dpo_finetune(ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                      std::span<const WinLosePair> pairs,
                      const DiffusionSchedule& schedule, const DpoConfig& cfg,
                      Rng& rng);

}  // namespace vidalign

#endif  // VIDALIGN_DPO_HPP_
