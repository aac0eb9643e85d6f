// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "graphrx/tape.hpp"

namespace graphrx::kg {

enum class LossKind { margin, logistic, self_adversarial };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

/// Ranking losses over one positive score per triple and k negatives per
/// positive (grouped: negatives of positive i occupy [i*k, (i+1)*k)).
///
/// margin:  mean over pairs of max(0, margin - pos + neg)
/// logistic: mean softplus(-pos) + mean softplus(neg)
/// self_adversarial: -log sigmoid(margin + pos)
///   - sum_j softmax(alpha * neg_j) log sigmoid(-margin - neg_j),
///   with the softmax weights treated as constants, averaged over
///   positives. alpha = 0 reduces to uniform 1/k weights.
Var kg_loss(LossKind kind, const Var& positive_scores, const Var& negative_scores, int64_t k,
            float margin, float adversarial_temperature);

}  // namespace graphrx::kg
