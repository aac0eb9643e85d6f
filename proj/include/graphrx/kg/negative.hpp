// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "graphrx/kg/store.hpp"

namespace graphrx::kg {

enum class NegativeMode { uniform, filtered };

/// k corruptions per positive, grouped by positive in order. Each
/// corruption replaces the head or the tail on a fair coin. Filtered
/// mode redraws the replacement entity while the corrupted triple is a
/// known fact, up to 100 retries, then accepts and counts the give-up.
struct NegativeBatch {
  std::vector<int64_t> heads;
  std::vector<int64_t> relations;
  std::vector<int64_t> tails;
  int64_t filter_giveups = 0;
};

NegativeBatch negative_sample(const TripletStore& store, std::span<const Triple> positives,
                              int64_t k, NegativeMode mode, uint64_t seed);

}  // namespace graphrx::kg
