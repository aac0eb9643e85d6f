// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "graphrx/kg/model.hpp"
#include "graphrx/kg/store.hpp"

namespace graphrx::kg {

struct DirectionMetrics {
  double mr = 0;
  double mrr = 0;
  double hits1 = 0;
  double hits3 = 0;
  double hits10 = 0;
};

struct EvalReport {
  DirectionMetrics head;      // ranking the true head
  DirectionMetrics tail;      // ranking the true tail
  DirectionMetrics combined;  // both directions pooled
  int64_t triple_count = 0;
  bool filtered = true;
};

/// Link-prediction ranking. For each triple and direction the true
/// entity is ranked against every entity; filtered mode drops candidates
/// that form another known fact. Ties rank pessimistically: the true
/// entity goes after every equal-scored candidate. Sharding across
/// threads is deterministic: per-triple integer ranks are merged by
/// exact summation.
EvalReport evaluate_ranking(const TripletStore& store, const EmbeddingModel& model,
                            std::span<const Triple> triples, bool filtered = true,
                            int num_threads = 1);

EvalReport evaluate_split(const TripletStore& store, const EmbeddingModel& model, Split split,
                          bool filtered = true, int num_threads = 1);

struct ScoredEntity {
  int64_t entity = 0;
  float score = 0;
};

/// Top-k tail completion for (head, relation, ?) by name. Known facts
/// are excluded unless include_known; ties order by entity index.
std::vector<ScoredEntity> query_topk(const TripletStore& store, const EmbeddingModel& model,
                                     const std::string& head, const std::string& relation,
                                     int64_t k, bool include_known = false);

}  // namespace graphrx::kg
