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

#include "vidalign/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace vidalign {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kConst: return "const";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kDiv: return "div";
    case OpKind::kNeg: return "neg";
    case OpKind::kScale: return "scale";
    case OpKind::kShift: return "shift";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kTanh: return "tanh";
    case OpKind::kMin: return "min";
    case OpKind::kMax: return "max";
    case OpKind::kClip: return "clip";
  }
  return "?";
}

double Var::value() const { return tape_->value(*this); }

Var Tape::push(OpKind kind, double val, int p0, double d0, int p1, double d1) {
  nodes_.push_back(Node{kind, p0, p1, d0, d1});
  vals_.push_back(val);
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::input(double v) { return push(OpKind::kInput, v, -1, 0.0); }
Var Tape::constant(double v) { return push(OpKind::kConst, v, -1, 0.0); }

Var Tape::add(Var a, Var b) {
  return push(OpKind::kAdd, value(a) + value(b), a.idx_, 1.0, b.idx_, 1.0);
}

Var Tape::sub(Var a, Var b) {
  return push(OpKind::kSub, value(a) - value(b), a.idx_, 1.0, b.idx_, -1.0);
}

Var Tape::mul(Var a, Var b) {
  const double va = value(a);
  const double vb = value(b);
  return push(OpKind::kMul, va * vb, a.idx_, vb, b.idx_, va);
}

Var Tape::div(Var a, Var b) {
  const double va = value(a);
  const double vb = value(b);
  return push(OpKind::kDiv, va / vb, a.idx_, 1.0 / vb, b.idx_,
              -va / (vb * vb));
}

Var Tape::neg(Var a) { return push(OpKind::kNeg, -value(a), a.idx_, -1.0); }

Var Tape::scale(Var a, double c) {
  return push(OpKind::kScale, c * value(a), a.idx_, c);
}

Var Tape::shift(Var a, double c) {
  return push(OpKind::kShift, value(a) + c, a.idx_, 1.0);
}

Var Tape::exp_op(Var a) {
  const double v = std::exp(value(a));
  return push(OpKind::kExp, v, a.idx_, v);
}

Var Tape::log_op(Var a) {
  const double v = value(a);
  return push(OpKind::kLog, std::log(v), a.idx_, 1.0 / v);
}

Var Tape::tanh_op(Var a) {
  const double v = std::tanh(value(a));
  return push(OpKind::kTanh, v, a.idx_, 1.0 - v * v);
}

Var Tape::min_op(Var a, Var b) {
  const double va = value(a);
  const double vb = value(b);
  // Left branch at ties.
  if (va <= vb) return push(OpKind::kMin, va, a.idx_, 1.0, b.idx_, 0.0);
  return push(OpKind::kMin, vb, a.idx_, 0.0, b.idx_, 1.0);
}

Var Tape::max_op(Var a, Var b) {
  const double va = value(a);
  const double vb = value(b);
  if (va >= vb) return push(OpKind::kMax, va, a.idx_, 1.0, b.idx_, 0.0);
  return push(OpKind::kMax, vb, a.idx_, 0.0, b.idx_, 1.0);
}

Var Tape::clip_op(Var a, double lo, double hi) {
  const double v = value(a);
  if (v < lo) return push(OpKind::kClip, lo, a.idx_, 0.0);
  if (v > hi) return push(OpKind::kClip, hi, a.idx_, 0.0);
  return push(OpKind::kClip, v, a.idx_, 1.0);
}

std::vector<double> Tape::gradient(Var loss) const {
  for (std::size_t i = 0; i < vals_.size(); ++i) {
    if (!std::isfinite(vals_[i])) {
      throw std::runtime_error("non-finite value at tape node " +
                               std::to_string(i) + " (" +
                               op_name(nodes_[i].kind) + ")");
    }
  }
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[static_cast<std::size_t>(loss.idx_)] = 1.0;
  for (int i = loss.idx_; i >= 0; --i) {
    const double a = adj[static_cast<std::size_t>(i)];
    if (a == 0.0) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.p0 >= 0) adj[static_cast<std::size_t>(n.p0)] += a * n.d0;
    if (n.p1 >= 0) adj[static_cast<std::size_t>(n.p1)] += a * n.d1;
  }
  return adj;
}

Var sum(std::span<const Var> xs) {
  Var acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = acc + xs[i];
  return acc;
}

Var dot(std::span<const Var> a, std::span<const Var> b) {
  Var acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}

Var softplus(Var x) {
  Tape& t = *x.tape();
  Var m = vmax(x, t.constant(0.0));
  return m + log(exp(-m) + exp(x - m));
}

Var log_sigmoid(Var x) { return -softplus(-x); }

std::vector<Var> log_softmax(std::span<const Var> logits) {
  Var m = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) m = vmax(m, logits[i]);
  Var s = exp(logits[0] - m);
  for (std::size_t i = 1; i < logits.size(); ++i) s = s + exp(logits[i] - m);
  Var lse = m + log(s);
  std::vector<Var> out;
  out.reserve(logits.size());
  for (Var l : logits) out.push_back(l - lse);
  return out;
}

}  // namespace vidalign
