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

#include "vidalign/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vidalign {

namespace {

std::vector<Var> make_inputs(Tape& tape, std::span<const double> values) {
  std::vector<Var> vars;
  vars.reserve(values.size());
  for (double v : values) vars.push_back(tape.input(v));
  return vars;
}

}  // namespace

GradResult grad(const LossBuilder& loss_builder, const ParamVector& at) {
  Tape tape;
  std::vector<Var> inputs = make_inputs(tape, at.values());
  Var loss = loss_builder(tape, inputs);
  std::vector<double> adj = tape.gradient(loss);
  GradResult result;
  result.value = loss.value();
  result.grad.reserve(inputs.size());
  for (const Var& v : inputs) {
    result.grad.push_back(adj[static_cast<std::size_t>(v.index())]);
  }
  return result;
}

double eval_loss(const LossBuilder& loss_builder, std::span<const double> at) {
  Tape tape;
  std::vector<Var> inputs = make_inputs(tape, at);
  return loss_builder(tape, inputs).value();
}

std::vector<double> finite_diff(const LossBuilder& loss_builder,
                                const ParamVector& at, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff: step must be > 0");
  std::vector<double> x = at.values();
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = eval_loss(loss_builder, x);
    x[i] = saved - step;
    const double down = eval_loss(loss_builder, x);
    x[i] = saved;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

double max_rel_error(std::span<const double> a, std::span<const double> b,
                     double floor) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("max_rel_error: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom =
        std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
    worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace vidalign
