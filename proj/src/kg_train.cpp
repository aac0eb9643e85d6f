// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/train.hpp"

#include <cmath>
#include <numeric>

#include "graphrx/error.hpp"
#include "graphrx/rng.hpp"

namespace graphrx::kg {

TrainResult train_kg(const TripletStore& store, EmbeddingModel& model, const TrainConfig& config,
                     const std::function<void(int64_t, float)>& on_epoch) {
  if (store.train().empty()) throw ContractError("train split is empty");
  if (config.batch_size < 1) throw ConfigError("batch size must be positive");

  Rng rng(config.seed);
  TrainResult result;
  result.epoch_loss.reserve(size_t(config.epochs));

  std::vector<int64_t> order(store.train().size());
  std::iota(order.begin(), order.end(), 0);

  Parameter* params[] = {&model.entity_table(), &model.relation_table()};
  OptimOptions optim{config.optimizer, config.lr};

  for (int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    int64_t batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += size_t(config.batch_size)) {
      size_t end = std::min(order.size(), begin + size_t(config.batch_size));
      std::vector<Triple> positives;
      positives.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) positives.push_back(store.train()[size_t(order[i])]);

      NegativeBatch negatives = negative_sample(store, positives, config.negatives,
                                                config.negative_mode, rng.next_u64());
      result.filter_giveups += negatives.filter_giveups;

      std::vector<int64_t> pos_h, pos_r, pos_t;
      for (const Triple& p : positives) {
        pos_h.push_back(p.head);
        pos_r.push_back(p.relation);
        pos_t.push_back(p.tail);
      }

      Tape tape;
      Var entity = tape.watch(model.entity_table());
      Var relation = tape.watch(model.relation_table());
      Var pos = model.score(entity, relation, pos_h, pos_r, pos_t);
      Var neg = model.score(entity, relation, negatives.heads, negatives.relations,
                            negatives.tails);
      Var loss = kg_loss(config.loss, pos, neg, config.negatives, config.margin,
                         config.adversarial_temperature);
      float loss_value = loss.value.item();
      if (!std::isfinite(loss_value))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batches));
      zero_grad(params);
      tape.backward(loss);
      optimizer_step(params, optim);
      model.project();

      epoch_loss += loss_value;
      ++batches;
    }
    float mean_loss = float(epoch_loss / double(batches));
    result.epoch_loss.push_back(mean_loss);
    if (on_epoch) on_epoch(epoch, mean_loss);
  }
  return result;
}

}  // namespace graphrx::kg
