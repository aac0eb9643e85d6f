// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphrx/tensor.hpp"

namespace graphrx {

class Tape;

/// A tensor that may be tracked on a tape. Untracked vars are constants.
struct Var {
  Tensor value;
  Tape* tape = nullptr;
  int node = -1;

  Var() = default;
  Var(Tensor v) : value(std::move(v)) {}  // NOLINT: implicit constant wrap
  bool tracked() const { return tape != nullptr; }
};

/// A trainable tensor: value, accumulated gradient and optimizer state.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor gradient;
  Tensor adam_m;
  Tensor adam_v;
  int64_t step = 0;

  Parameter() = default;
  Parameter(std::string name, Tensor v)
      : name(std::move(name)), value(std::move(v)), gradient(Tensor::zeros(value.shape())) {}

  void zero_grad() { gradient = Tensor::zeros(value.shape()); }
};

/// Append-only record of operations for reverse-mode differentiation.
///
/// Inputs of a node always precede it, so one reverse sweep from the loss
/// visits nodes in a valid topological order. A tape belongs to a single
/// thread of execution.
class Tape {
public:
  using BackwardFn = std::function<void(Tape&, const Tensor& out_grad)>;

  /// Starts tracking a constant value as a leaf node.
  Var leaf(const Tensor& value);

  /// Leaf bound to a parameter; backward() adds into parameter.gradient.
  Var watch(Parameter& p);

  /// Reverse sweep from a scalar loss. Node gradients are recomputed per
  /// call; watched parameter gradients accumulate across calls.
  void backward(const Var& loss);

  /// Gradient of the given node after backward(). Zeros if unreachable.
  Tensor gradient_of(const Var& v) const;

  /// Used by operator implementations to add into a node gradient.
  void accumulate(int node, const Tensor& grad);

  /// Records a new node; returns its id.
  int record(Tensor value, BackwardFn back);

  const Tensor& value_of(int node) const { return nodes_[size_t(node)].value; }
  size_t size() const { return nodes_.size(); }

private:
  struct Node {
    Tensor value;
    BackwardFn back;
  };
  std::vector<Node> nodes_;
  std::vector<std::optional<Tensor>> grads_;
  std::vector<std::pair<int, Parameter*>> watched_;
};

enum class EwBinary { add, sub, mul };
enum class EwUnary { relu, sigmoid, exp, log, neg, abs, sqrt, sin, cos, softplus };
enum class ReduceOp { sum, mean, max };

/// Pointwise binary op. Equal shapes, or a scalar against any shape, or a
/// single row [1 x n] (rank 1 or 2) against a matrix [m x n], either side.
Var elementwise(EwBinary op, const Var& a, const Var& b);
Var elementwise(EwUnary op, const Var& x);
Var reduce(ReduceOp op, const Var& x, std::optional<int64_t> axis = std::nullopt);

Var matmul(const Var& a, const Var& b);
Var gather_rows(const Var& x, const std::vector<int64_t>& idx);
Var scatter_add_rows(const Var& src, const std::vector<int64_t>& idx, int64_t num_rows);
/// Columns [begin, end) of a rank-2 tensor.
Var slice_cols(const Var& x, int64_t begin, int64_t end);

inline Var add(const Var& a, const Var& b) { return elementwise(EwBinary::add, a, b); }
inline Var sub(const Var& a, const Var& b) { return elementwise(EwBinary::sub, a, b); }
inline Var mul(const Var& a, const Var& b) { return elementwise(EwBinary::mul, a, b); }
inline Var relu(const Var& x) { return elementwise(EwUnary::relu, x); }
inline Var sigmoid(const Var& x) { return elementwise(EwUnary::sigmoid, x); }
inline Var neg(const Var& x) { return elementwise(EwUnary::neg, x); }
inline Var softplus(const Var& x) { return elementwise(EwUnary::softplus, x); }
inline Var reduce_sum(const Var& x, std::optional<int64_t> axis = std::nullopt) {
  return reduce(ReduceOp::sum, x, axis);
}
inline Var reduce_mean(const Var& x, std::optional<int64_t> axis = std::nullopt) {
  return reduce(ReduceOp::mean, x, axis);
}
inline Var reduce_max(const Var& x, std::optional<int64_t> axis = std::nullopt) {
  return reduce(ReduceOp::max, x, axis);
}

}  // namespace graphrx
