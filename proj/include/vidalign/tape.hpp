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

#ifndef VIDALIGN_TAPE_HPP_
#define VIDALIGN_TAPE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vidalign {

// Scalar reverse-mode tape. Nodes are appended in evaluation order, so
// parents always precede children; local partials are computed at forward
// time and stored on the node.
//
// min/max/clip take the left argument's branch at exact ties. This is a
// documented subgradient choice and keeps gradients deterministic.

enum class OpKind : std::uint8_t {
  kInput,
  kConst,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kScale,  // c * x, c baked into the partial
  kShift,  // x + c
  kExp,
  kLog,
  kTanh,
  kMin,
  kMax,
  kClip,
};

const char* op_name(OpKind kind);

class Tape;

class Var {
 public:
  Var() = default;
  double value() const;
  int index() const { return idx_; }
  Tape* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int idx) : tape_(tape), idx_(idx) {}
  Tape* tape_ = nullptr;
  int idx_ = -1;
};

class Tape {
 public:
  Var input(double v);
  Var constant(double v);

  double value(Var v) const { return vals_[static_cast<std::size_t>(v.idx_)]; }
  std::size_t size() const { return nodes_.size(); }

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var neg(Var a);
  Var scale(Var a, double c);
  Var shift(Var a, double c);
  Var exp_op(Var a);
  Var log_op(Var a);
  Var tanh_op(Var a);
  Var min_op(Var a, Var b);
  Var max_op(Var a, Var b);
  Var clip_op(Var a, double lo, double hi);

  // Reverse sweep from `loss`; returns the adjoint of every node.
  // Throws std::runtime_error naming the offending node if any stored
  // forward value is non-finite.
  std::vector<double> gradient(Var loss) const;

 private:
  struct Node {
    OpKind kind;
    std::int32_t p0;
    std::int32_t p1;
    double d0;
    double d1;
  };

  Var push(OpKind kind, double val, int p0, double d0, int p1 = -1,
           double d1 = 0.0);

  std::vector<Node> nodes_;
  std::vector<double> vals_;
};

// Operator sugar. Mixed Var/double forms avoid materializing constant nodes.
inline Var operator+(Var a, Var b) { return a.tape()->add(a, b); }
inline Var operator-(Var a, Var b) { return a.tape()->sub(a, b); }
inline Var operator*(Var a, Var b) { return a.tape()->mul(a, b); }
inline Var operator/(Var a, Var b) { return a.tape()->div(a, b); }
inline Var operator-(Var a) { return a.tape()->neg(a); }
inline Var operator+(Var a, double c) { return a.tape()->shift(a, c); }
inline Var operator+(double c, Var a) { return a.tape()->shift(a, c); }
inline Var operator-(Var a, double c) { return a.tape()->shift(a, -c); }
inline Var operator-(double c, Var a) {
  return a.tape()->shift(a.tape()->neg(a), c);
}
inline Var operator*(Var a, double c) { return a.tape()->scale(a, c); }
inline Var operator*(double c, Var a) { return a.tape()->scale(a, c); }
inline Var operator/(Var a, double c) { return a.tape()->scale(a, 1.0 / c); }

inline Var exp(Var a) { return a.tape()->exp_op(a); }
inline Var log(Var a) { return a.tape()->log_op(a); }
inline Var tanh(Var a) { return a.tape()->tanh_op(a); }
inline Var vmin(Var a, Var b) { return a.tape()->min_op(a, b); }
inline Var vmax(Var a, Var b) { return a.tape()->max_op(a, b); }
inline Var clip(Var a, double lo, double hi) {
  return a.tape()->clip_op(a, lo, hi);
}

Var sum(std::span<const Var> xs);
Var dot(std::span<const Var> a, std::span<const Var> b);

// log(1 + e^x), computed as m + log(e^{-m} + e^{x-m}) with m = max(x, 0).
Var softplus(Var x);
// log sigma(x) = -softplus(-x).
Var log_sigmoid(Var x);

// Log-softmax over a logit vector; numerically stabilized by max
// subtraction (the max term cancels in the derivative).
std::vector<Var> log_softmax(std::span<const Var> logits);

}  // namespace vidalign

#endif  // VIDALIGN_TAPE_HPP_
