// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/optim.hpp"

#include <cmath>

#include "graphrx/error.hpp"

namespace graphrx {

void optimizer_step(std::span<Parameter*> params, const OptimOptions& options) {
  for (Parameter* p : params) {
    if (!p->gradient.all_finite())
      throw NumericError("non-finite gradient on parameter \"" + p->name + "\"");
    p->step += 1;
    auto value = p->value.mutable_data();
    auto grad = p->gradient.data();
    switch (options.kind) {
      case OptimizerKind::sgd:
        for (size_t i = 0; i < value.size(); ++i) value[i] -= options.lr * grad[i];
        break;
      case OptimizerKind::adam: {
        if (p->adam_m.numel() != p->value.numel()) {
          p->adam_m = Tensor::zeros(p->value.shape());
          p->adam_v = Tensor::zeros(p->value.shape());
        }
        auto m = p->adam_m.mutable_data();
        auto v = p->adam_v.mutable_data();
        float b1 = options.beta1, b2 = options.beta2;
        float bias1 = 1.f - std::pow(b1, float(p->step));
        float bias2 = 1.f - std::pow(b2, float(p->step));
        for (size_t i = 0; i < value.size(); ++i) {
          m[i] = b1 * m[i] + (1.f - b1) * grad[i];
          v[i] = b2 * v[i] + (1.f - b2) * grad[i] * grad[i];
          float m_hat = m[i] / bias1;
          float v_hat = v[i] / bias2;
          value[i] -= options.lr * m_hat / (std::sqrt(v_hat) + options.epsilon);
        }
        break;
      }
    }
  }
}

void zero_grad(std::span<Parameter*> params) {
  for (Parameter* p : params) p->zero_grad();
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer \"" + name + "\" (expected sgd or adam)");
}

}  // namespace graphrx
