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

#include "vidalign/dpo.hpp"

#include <cmath>
#include <stdexcept>

namespace vidalign {

namespace {

double sq_error(std::span<const double> eps, std::span<const double> pred) {
  double acc = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double d = eps[i] - pred[i];
    acc += d * d;
  }
  return acc;
}

double stable_softplus(double x) {
  const double m = std::max(x, 0.0);
  return m + std::log(std::exp(-m) + std::exp(x - m));
}

void check_pair(const ToyGenerator& gen, const WinLosePair& pair) {
  const std::size_t dim = static_cast<std::size_t>(gen.latent_dim());
  if (pair.winner.size() != dim || pair.loser.size() != dim) {
    throw std::invalid_argument("dpo: latent dimension mismatch");
  }
}

}  // namespace

double dpo_inner_margin(const ToyGenerator& gen_theta,
                        const ToyGenerator& gen_ref, const WinLosePair& pair,
                        const DiffusionSchedule& schedule, int t,
                        std::span<const double> eps_w,
                        std::span<const double> eps_l) {
  check_pair(gen_theta, pair);
  const std::vector<double> xtw = noise_with(schedule, pair.winner, t, eps_w);
  const std::vector<double> xtl = noise_with(schedule, pair.loser, t, eps_l);

  const double win_term =
      sq_error(eps_w, gen_theta.predict_noise(xtw, t, schedule)) -
      sq_error(eps_w, gen_ref.predict_noise(xtw, t, schedule));
  const double lose_term =
      sq_error(eps_l, gen_theta.predict_noise(xtl, t, schedule)) -
      sq_error(eps_l, gen_ref.predict_noise(xtl, t, schedule));
  // Implicit margin; positive is good for theta.
  return -(win_term - lose_term);
}

double dpo_loss(const ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                const WinLosePair& pair, const DiffusionSchedule& schedule,
                int t, std::span<const double> eps_w,
                std::span<const double> eps_l, const DpoConfig& cfg) {
  const double margin =
      dpo_inner_margin(gen_theta, gen_ref, pair, schedule, t, eps_w, eps_l);
  // -log sigma(w * margin) = softplus(-w * margin)
  return stable_softplus(-cfg.weight_const * margin);
}

Var dpo_loss_tape(std::span<const Var> theta_vars,
                  const ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                  const WinLosePair& pair, const DiffusionSchedule& schedule,
                  int t, std::span<const double> eps_w,
                  std::span<const double> eps_l, const DpoConfig& cfg) {
  check_pair(gen_theta, pair);
  const std::vector<double> xtw = noise_with(schedule, pair.winner, t, eps_w);
  const std::vector<double> xtl = noise_with(schedule, pair.loser, t, eps_l);

  const double ref_w = sq_error(eps_w, gen_ref.predict_noise(xtw, t, schedule));
  const double ref_l = sq_error(eps_l, gen_ref.predict_noise(xtl, t, schedule));

  const auto sq_error_tape = [](std::span<const double> eps,
                                const std::vector<Var>& pred) {
    Var d0 = pred[0] - eps[0];
    Var acc = d0 * d0;
    for (std::size_t i = 1; i < pred.size(); ++i) {
      Var d = pred[i] - eps[i];
      acc = acc + d * d;
    }
    return acc;
  };

  Var theta_w =
      sq_error_tape(eps_w, gen_theta.predict_noise_tape(theta_vars, xtw, t, schedule));
  Var theta_l =
      sq_error_tape(eps_l, gen_theta.predict_noise_tape(theta_vars, xtl, t, schedule));

  Var inner = (theta_w - ref_w) - (theta_l - ref_l);
  return softplus(cfg.weight_const * inner);
}

DpoTrace dpo_finetune(ToyGenerator& gen_theta, const ToyGenerator& gen_ref,
                      std::span<const WinLosePair> pairs,
                      const DiffusionSchedule& schedule, const DpoConfig& cfg,
                      Rng& rng) {
  if (pairs.empty()) throw std::invalid_argument("dpo_finetune: no pairs");

  DpoTrace trace;
  const std::size_t dim = static_cast<std::size_t>(gen_theta.latent_dim());

  for (int step = 0; step < cfg.steps; ++step) {
    struct Draw {
      const WinLosePair* pair;
      int t;
      std::vector<double> eps_w, eps_l;
    };
    std::vector<Draw> batch;
    for (int b = 0; b < cfg.minibatch; ++b) {
      Draw d;
      d.pair = &pairs[static_cast<std::size_t>(
          rng.uniform_int(static_cast<int>(pairs.size())))];
      d.t = rng.uniform_int(schedule.timesteps);
      d.eps_w.resize(dim);
      d.eps_l.resize(dim);
      for (double& e : d.eps_w) e = rng.normal();
      for (double& e : d.eps_l) e = rng.normal();
      batch.push_back(std::move(d));
    }

    const LossBuilder builder = [&](Tape&, std::span<const Var> p) -> Var {
      Var acc = dpo_loss_tape(p, gen_theta, gen_ref, *batch[0].pair, schedule,
                              batch[0].t, batch[0].eps_w, batch[0].eps_l, cfg);
      for (std::size_t b = 1; b < batch.size(); ++b) {
        acc = acc + dpo_loss_tape(p, gen_theta, gen_ref, *batch[b].pair,
                                  schedule, batch[b].t, batch[b].eps_w,
                                  batch[b].eps_l, cfg);
      }
      return acc * (1.0 / static_cast<double>(batch.size()));
    };
    const GradResult g = grad(builder, gen_theta.params());
    double norm2 = 0.0;
    for (double gj : g.grad) norm2 += gj * gj;
    const double norm = std::sqrt(norm2);
    const double scale =
        norm > cfg.max_grad_norm ? cfg.max_grad_norm / norm : 1.0;
    std::vector<double>& p = gen_theta.params().values();
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] -= cfg.learning_rate * scale * g.grad[j];
    }

    double margin_sum = 0.0;
    for (const Draw& d : batch) {
      margin_sum += dpo_inner_margin(gen_theta, gen_ref, *d.pair, schedule,
                                     d.t, d.eps_w, d.eps_l);
    }
    trace.losses.push_back(g.value);
    trace.mean_margins.push_back(margin_sum /
                                 static_cast<double>(batch.size()));
  }
  return trace;
}

}  // namespace vidalign
