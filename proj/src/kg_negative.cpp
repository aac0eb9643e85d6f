// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/negative.hpp"

#include "graphrx/error.hpp"
#include "graphrx/rng.hpp"

namespace graphrx::kg {

NegativeBatch negative_sample(const TripletStore& store, std::span<const Triple> positives,
                              int64_t k, NegativeMode mode, uint64_t seed) {
  if (k < 1) throw ContractError("negatives per positive must be at least 1");
  Rng rng(seed);
  NegativeBatch batch;
  batch.heads.reserve(positives.size() * size_t(k));
  batch.relations.reserve(positives.size() * size_t(k));
  batch.tails.reserve(positives.size() * size_t(k));

  uint64_t num_entities = uint64_t(store.num_entities());
  for (const Triple& positive : positives) {
    for (int64_t j = 0; j < k; ++j) {
      bool corrupt_head = rng.coin();
      int64_t replacement = int64_t(rng.below(num_entities));
      if (mode == NegativeMode::filtered) {
        int tries = 0;
        auto collides = [&](int64_t e) {
          return corrupt_head ? store.known_fact(e, positive.relation, positive.tail)
                              : store.known_fact(positive.head, positive.relation, e);
        };
        while (collides(replacement) && tries < 100) {
          replacement = int64_t(rng.below(num_entities));
          ++tries;
        }
        if (collides(replacement)) batch.filter_giveups++;
      }
      batch.heads.push_back(corrupt_head ? replacement : positive.head);
      batch.relations.push_back(positive.relation);
      batch.tails.push_back(corrupt_head ? positive.tail : replacement);
    }
  }
  return batch;
}

}  // namespace graphrx::kg
