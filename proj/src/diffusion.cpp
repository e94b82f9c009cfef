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

#include "vidalign/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace vidalign {

DiffusionSchedule DiffusionSchedule::linear(int timesteps, double beta_start,
                                            double beta_end) {
  DiffusionSchedule s;
  s.timesteps = timesteps;
  s.beta.resize(static_cast<std::size_t>(timesteps));
  s.alpha_bar.resize(static_cast<std::size_t>(timesteps));
  double prod = 1.0;
  for (int t = 0; t < timesteps; ++t) {
    const double frac =
        timesteps == 1 ? 0.0 : static_cast<double>(t) / (timesteps - 1);
    s.beta[static_cast<std::size_t>(t)] =
        beta_start + (beta_end - beta_start) * frac;
    prod *= 1.0 - s.beta[static_cast<std::size_t>(t)];
    s.alpha_bar[static_cast<std::size_t>(t)] = prod;
  }
  return s;
}

std::vector<double> noise_with(const DiffusionSchedule& schedule,
                               std::span<const double> x0, int t,
                               std::span<const double> eps) {
  if (t < 0 || t >= schedule.timesteps) {
    throw std::invalid_argument("noise: timestep out of range");
  }
  const double ab = schedule.alpha_bar[static_cast<std::size_t>(t)];
  const double a = std::sqrt(ab);
  const double b = std::sqrt(1.0 - ab);
  std::vector<double> x_t(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) x_t[i] = a * x0[i] + b * eps[i];
  return x_t;
}

NoiseResult noise(const DiffusionSchedule& schedule, std::span<const double> x0,
                  int t, Rng& rng) {
  NoiseResult r;
  r.eps.resize(x0.size());
  for (double& e : r.eps) e = rng.normal();
  r.x_t = noise_with(schedule, x0, t, r.eps);
  return r;
}

ToyGenerator::ToyGenerator(int latent_dim, int hidden_dim, Rng& init_rng)
    : latent_dim_(latent_dim), hidden_dim_(hidden_dim) {
  const int in_dim = latent_dim + 1;  // latent plus normalized timestep
  params_.add_segment("w1", static_cast<std::size_t>(hidden_dim),
                      static_cast<std::size_t>(in_dim));
  params_.add_segment("b1", static_cast<std::size_t>(hidden_dim), 1);
  params_.add_segment("w2", static_cast<std::size_t>(latent_dim),
                      static_cast<std::size_t>(hidden_dim));
  params_.add_segment("b2", static_cast<std::size_t>(latent_dim), 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (double& w : params_.segment("w1")) w = scale * init_rng.normal();
  // w2/b2 stay zero: the untrained generator predicts zero noise.
}

namespace {

template <class R>
std::vector<R> generator_forward(std::span<const R> p, const ParamVector& layout,
                                 int latent_dim, int hidden_dim,
                                 std::span<const double> x_t, double t_norm) {
  using std::tanh;
  const int in_dim = latent_dim + 1;
  const std::size_t w1 = layout.offset_of("w1");
  const std::size_t b1 = layout.offset_of("b1");
  const std::size_t w2 = layout.offset_of("w2");
  const std::size_t b2 = layout.offset_of("b2");

  std::vector<R> h;
  h.reserve(static_cast<std::size_t>(hidden_dim));
  for (int i = 0; i < hidden_dim; ++i) {
    const std::size_t row = w1 + static_cast<std::size_t>(i * in_dim);
    R acc = p[b1 + static_cast<std::size_t>(i)];
    for (int k = 0; k < latent_dim; ++k) {
      acc = acc + x_t[static_cast<std::size_t>(k)] *
                      p[row + static_cast<std::size_t>(k)];
    }
    acc = acc + t_norm * p[row + static_cast<std::size_t>(latent_dim)];
    h.push_back(tanh(acc));
  }

  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(latent_dim));
  for (int k = 0; k < latent_dim; ++k) {
    R acc = p[b2 + static_cast<std::size_t>(k)];
    for (int i = 0; i < hidden_dim; ++i) {
      acc = acc + h[static_cast<std::size_t>(i)] *
                      p[w2 + static_cast<std::size_t>(k * hidden_dim + i)];
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace

std::vector<double> ToyGenerator::predict_noise(
    std::span<const double> x_t, int t, const DiffusionSchedule& schedule) const {
  if (static_cast<int>(x_t.size()) != latent_dim_) {
    throw std::invalid_argument("predict_noise: dimension mismatch");
  }
  const double t_norm = static_cast<double>(t) / schedule.timesteps;
  return generator_forward<double>(params_.values(), params_, latent_dim_,
                                   hidden_dim_, x_t, t_norm);
}

std::vector<Var> ToyGenerator::predict_noise_tape(
    std::span<const Var> param_vars, std::span<const double> x_t, int t,
    const DiffusionSchedule& schedule) const {
  if (static_cast<int>(x_t.size()) != latent_dim_) {
    throw std::invalid_argument("predict_noise: dimension mismatch");
  }
  const double t_norm = static_cast<double>(t) / schedule.timesteps;
  return generator_forward<Var>(param_vars, params_, latent_dim_, hidden_dim_,
                                x_t, t_norm);
}

std::vector<double> generate(const ToyGenerator& generator,
                             const DiffusionSchedule& schedule, Rng& rng) {
  const int dim = generator.latent_dim();
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (double& v : x) v = rng.normal();

  for (int t = schedule.timesteps - 1; t >= 0; --t) {
    const double beta = schedule.beta[static_cast<std::size_t>(t)];
    const double alpha = 1.0 - beta;
    const double ab = schedule.alpha_bar[static_cast<std::size_t>(t)];
    const std::vector<double> eps_hat = generator.predict_noise(x, t, schedule);
    for (int k = 0; k < dim; ++k) {
      x[static_cast<std::size_t>(k)] =
          (x[static_cast<std::size_t>(k)] -
           beta / std::sqrt(1.0 - ab) * eps_hat[static_cast<std::size_t>(k)]) /
          std::sqrt(alpha);
    }
    if (t > 0) {
      const double sigma = std::sqrt(beta);
      for (double& v : x) v += sigma * rng.normal();
    }
  }
  return x;
}

void pretrain_generator(ToyGenerator& generator,
                        const DiffusionSchedule& schedule,
                        std::span<const std::vector<double>> data,
                        double learning_rate, int steps, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("pretrain: empty data");
  for (int step = 0; step < steps; ++step) {
    const std::vector<double>& x0 =
        data[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(data.size())))];
    const int t = rng.uniform_int(schedule.timesteps);
    const NoiseResult nr = noise(schedule, x0, t, rng);

    const LossBuilder builder = [&](Tape&, std::span<const Var> p) -> Var {
      const std::vector<Var> eps_hat =
          generator.predict_noise_tape(p, nr.x_t, t, schedule);
      Var acc = (eps_hat[0] - nr.eps[0]) * (eps_hat[0] - nr.eps[0]);
      for (std::size_t k = 1; k < eps_hat.size(); ++k) {
        Var d = eps_hat[k] - nr.eps[k];
        acc = acc + d * d;
      }
      return acc;
    };
    const GradResult g = grad(builder, generator.params());
    std::vector<double>& p = generator.params().values();
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] -= learning_rate * g.grad[j];
    }
  }
}

}  // namespace vidalign
