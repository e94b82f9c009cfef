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

#ifndef VIDALIGN_NUMKIT_HPP_
#define VIDALIGN_NUMKIT_HPP_

#include <functional>
#include <span>
#include <vector>

#include "vidalign/param_vector.hpp"
#include "vidalign/tape.hpp"

namespace vidalign {

// A loss expressed over parameter Vars. The builder must use only the
// tape's primitive ops so both the reverse sweep and plain forward
// evaluation are defined.
using LossBuilder = std::function<Var(Tape&, std::span<const Var>)>;

struct GradResult {
  double value;
  std::vector<double> grad;  // one entry per parameter
};

// Reverse-mode gradient of the loss at `at`.
GradResult grad(const LossBuilder& loss_builder, const ParamVector& at);

// Forward evaluation only (no reverse sweep).
double eval_loss(const LossBuilder& loss_builder, std::span<const double> at);

// Central finite differences, (L(x + h e_i) - L(x - h e_i)) / (2h).
// Independent of the reverse sweep; this is the oracle every gradient in
// the repo is checked against.
std::vector<double> finite_diff(const LossBuilder& loss_builder,
                                const ParamVector& at, double step);

// Stable softmax with max subtraction; entries positive, sum 1.
std::vector<double> softmax(std::span<const double> logits);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
double max_rel_error(std::span<const double> a, std::span<const double> b,
                     double floor = 1e-3);

}  // namespace vidalign

#endif  // VIDALIGN_NUMKIT_HPP_
