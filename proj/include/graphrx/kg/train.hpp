// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "graphrx/kg/loss.hpp"
#include "graphrx/kg/model.hpp"
#include "graphrx/kg/negative.hpp"
#include "graphrx/kg/store.hpp"
#include "graphrx/optim.hpp"

namespace graphrx::kg {

struct TrainConfig {
  int64_t epochs = 500;
  int64_t batch_size = 64;
  float lr = 0.05f;
  int64_t negatives = 8;
  LossKind loss = LossKind::margin;
  float margin = 2.f;
  float adversarial_temperature = 1.f;
  NegativeMode negative_mode = NegativeMode::uniform;
  OptimizerKind optimizer = OptimizerKind::adam;
  uint64_t seed = 0;
};

struct TrainResult {
  std::vector<float> epoch_loss;  // mean batch loss per epoch
  int64_t filter_giveups = 0;
};

/// Mini-batch loop over seeded shuffles of the train split. After each
/// step the model projects its tables (transe renorm, rotate wrap).
/// Aborts with a NumericError naming the epoch/batch if the loss leaves
/// the finite range. The per-epoch callback, when given, observes the
/// loss curve as it forms.
TrainResult train_kg(const TripletStore& store, EmbeddingModel& model, const TrainConfig& config,
                     const std::function<void(int64_t epoch, float loss)>& on_epoch = {});

}  // namespace graphrx::kg
