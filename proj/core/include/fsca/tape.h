// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_TAPE_H_
#define FSCA_TAPE_H_

#include <deque>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fsca/tensor.h"

namespace fsca {

// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Activation tape. Every primitive in ops.h records its output together with
// an analytic backward closure; Backward() replays the closures in exact
// reverse order of recording. Leaves may reference external storage (model
// parameters, shared embeddings) without copying; such storage must outlive
// the tape and must not be modified while the tape is alive.
//
// A tape is single-threaded. Independent tapes may run concurrently over the
// same read-only parameters.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Matrix& dy)>;

  // grad_enabled = false records values only (inference).
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  bool grad_enabled() const { return grad_enabled_; }

  // Owned leaf that never receives a gradient.
  Var Constant(Matrix value);
  // Owned leaf; receives a gradient when requires_grad and grads are enabled.
  Var Input(Matrix value, bool requires_grad);
  // Leaf viewing external storage.
  Var Ref(const Matrix& value, bool requires_grad);
  // Leaf viewing a parameter; repeated binds of the same parameter return the
  // same Var so that its gradient is accumulated once.
  Var Bind(const Parameter& p);

  // Records a computed value. The backward closure is kept only when at least
  // one input requires a gradient.
  Var Record(Matrix value, std::initializer_list<Var> inputs, BackwardFn fn);

  const Matrix& Value(Var v) const { return *nodes_[v.id].value; }
  bool RequiresGrad(Var v) const { return nodes_[v.id].requires_grad; }
  // Gradient buffer, zero-initialized on first access.
  Matrix& Grad(Var v);
  bool HasGrad(Var v) const { return nodes_[v.id].grad.size() != 0; }

  // Seeds d(output) and runs the reverse pass.
  void Backward(Var output, const Matrix& seed);
  // Runs the reverse pass over whatever gradients have been seeded.
  void Backward();

  // Gradient that reached an external Ref/Bind leaf; empty when the storage
  // was never bound or received no gradient.
  Matrix GradOf(const Matrix& external) const;

  // (parameter, gradient) for every bound parameter that received a
  // gradient, in binding order.
  std::vector<std::pair<const Parameter*, const Matrix*>> ParamGrads() const;

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix owned;
    const Matrix* value = nullptr;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  Var Push(Node node);

  bool grad_enabled_;
  // deque keeps node addresses stable, so Value() references and the
  // self-pointing `value` member survive further recording.
  std::deque<Node> nodes_;
  std::unordered_map<const Matrix*, int> external_;
  std::vector<std::pair<const Parameter*, int>> params_;
};

// Adds `contribution` into the gradient of `v` if it requires one.
template <typename Derived>
inline void Accumulate(Tape& t, Var v, const Eigen::MatrixBase<Derived>& g) {
  if (t.RequiresGrad(v)) t.Grad(v).noalias() += g;
}

}  // namespace fsca

#endif  // FSCA_TAPE_H_
