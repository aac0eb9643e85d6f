// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/loss.hpp"

#include <cmath>

#include "graphrx/error.hpp"

namespace graphrx::kg {

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "margin") return LossKind::margin;
  if (name == "logistic") return LossKind::logistic;
  if (name == "self_adversarial") return LossKind::self_adversarial;
  throw ConfigError("unknown loss \"" + name +
                    "\" (expected margin, logistic or self_adversarial)");
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::margin: return "margin";
    case LossKind::logistic: return "logistic";
    case LossKind::self_adversarial: return "self_adversarial";
  }
  return "?";
}

namespace {

// Repeats each positive score k times to align with its negatives.
Var repeat_per_negative(const Var& positives, int64_t k) {
  std::vector<int64_t> idx;
  idx.reserve(size_t(positives.value.numel() * k));
  for (int64_t i = 0; i < positives.value.numel(); ++i)
    for (int64_t j = 0; j < k; ++j) idx.push_back(i);
  return gather_rows(positives, idx);
}

std::vector<int64_t> group_ids(int64_t batch, int64_t k) {
  std::vector<int64_t> ids;
  ids.reserve(size_t(batch * k));
  for (int64_t i = 0; i < batch; ++i)
    for (int64_t j = 0; j < k; ++j) ids.push_back(i);
  return ids;
}

}  // namespace

Var kg_loss(LossKind kind, const Var& pos, const Var& neg, int64_t k, float margin,
            float adversarial_temperature) {
  int64_t batch = pos.value.numel();
  if (neg.value.numel() != batch * k)
    throw DimensionError("expected " + std::to_string(batch * k) + " negative scores, got " +
                         std::to_string(neg.value.numel()));
  if (batch == 0) throw ContractError("empty loss batch");

  switch (kind) {
    case LossKind::margin: {
      Var pos_rep = repeat_per_negative(pos, k);
      Var hinge = relu(add(sub(Var(Tensor::scalar(margin)), pos_rep), neg));
      return reduce_mean(hinge);
    }
    case LossKind::logistic:
      return add(reduce_mean(softplus(graphrx::neg(pos))), reduce_mean(softplus(neg)));
    case LossKind::self_adversarial: {
      // Detached softmax weights over each positive's negatives.
      Tensor weights = Tensor::zeros(neg.value.shape());
      auto w = weights.mutable_data();
      auto scores = neg.value.data();
      for (int64_t i = 0; i < batch; ++i) {
        float peak = -std::numeric_limits<float>::infinity();
        for (int64_t j = 0; j < k; ++j)
          peak = std::max(peak, adversarial_temperature * scores[size_t(i * k + j)]);
        double total = 0;
        for (int64_t j = 0; j < k; ++j) {
          float e = std::exp(adversarial_temperature * scores[size_t(i * k + j)] - peak);
          w[size_t(i * k + j)] = e;
          total += e;
        }
        for (int64_t j = 0; j < k; ++j) w[size_t(i * k + j)] /= float(total);
      }
      // -log sigmoid(m + pos) = softplus(-(m + pos)); likewise for negatives.
      Var margin_scalar(Tensor::scalar(margin));
      Var pos_term = softplus(graphrx::neg(add(margin_scalar, pos)));
      Var neg_term = mul(softplus(add(margin_scalar, neg)), Var(weights));
      Var neg_grouped = scatter_add_rows(neg_term, group_ids(batch, k), batch);
      return reduce_mean(add(pos_term, neg_grouped));
    }
  }
  throw ContractError("bad loss kind");
}

}  // namespace graphrx::kg
