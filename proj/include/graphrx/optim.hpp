// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "graphrx/tape.hpp"

namespace graphrx {

enum class OptimizerKind { sgd, adam };

struct OptimOptions {
  OptimizerKind kind = OptimizerKind::adam;
  float lr = 1e-3f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float epsilon = 1e-8f;
};

/// Applies one SGD/Adam update in place and advances each step counter.
/// Gradients are left untouched; call zero_grad per step explicitly.
void optimizer_step(std::span<Parameter*> params, const OptimOptions& options);

void zero_grad(std::span<Parameter*> params);

OptimizerKind optimizer_kind_from_string(const std::string& name);

}  // namespace graphrx
