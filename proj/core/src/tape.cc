// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/tape.h"

namespace fsca {

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  Node& n = nodes_.back();
  if (n.value == nullptr) n.value = &n.owned;
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Constant(Matrix value) {
  Node n;
  n.owned = std::move(value);
  return Push(std::move(n));
}

Var Tape::Input(Matrix value, bool requires_grad) {
  Node n;
  n.owned = std::move(value);
  n.requires_grad = requires_grad && grad_enabled_;
  return Push(std::move(n));
}

Var Tape::Ref(const Matrix& value, bool requires_grad) {
  auto it = external_.find(&value);
  if (it != external_.end()) return Var{it->second};
  Node n;
  n.value = &value;
  n.requires_grad = requires_grad && grad_enabled_;
  Var v = Push(std::move(n));
  external_.emplace(&value, v.id);
  return v;
}

Var Tape::Bind(const Parameter& p) {
  bool fresh = external_.find(&p.value) == external_.end();
  Var v = Ref(p.value, true);
  if (fresh) params_.emplace_back(&p, v.id);
  return v;
}

Var Tape::Record(Matrix value, std::initializer_list<Var> inputs,
                 BackwardFn fn) {
  Node n;
  n.owned = std::move(value);
  if (grad_enabled_) {
    for (Var in : inputs) {
      if (nodes_[in.id].requires_grad) {
        n.requires_grad = true;
        break;
      }
    }
  }
  if (n.requires_grad) n.backward = std::move(fn);
  return Push(std::move(n));
}

Matrix& Tape::Grad(Var v) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0) n.grad.setZero(n.value->rows(), n.value->cols());
  return n.grad;
}

void Tape::Backward(Var output, const Matrix& seed) {
  ExpectShape(seed, Value(output).rows(), Value(output).cols(),
              "Tape::Backward seed");
  if (!RequiresGrad(output)) return;
  Grad(output) += seed;
  Backward();
}

void Tape::Backward() {
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.backward || n.grad.size() == 0) continue;
    n.backward(*this, n.grad);
  }
}

Matrix Tape::GradOf(const Matrix& external) const {
  auto it = external_.find(&external);
  if (it == external_.end()) return Matrix();
  return nodes_[it->second].grad;
}

std::vector<std::pair<const Parameter*, const Matrix*>> Tape::ParamGrads()
    const {
  std::vector<std::pair<const Parameter*, const Matrix*>> out;
  out.reserve(params_.size());
  for (const auto& [p, id] : params_) {
    const Node& n = nodes_[id];
    if (n.grad.size() != 0) out.emplace_back(p, &n.grad);
  }
  return out;
}

}  // namespace fsca
