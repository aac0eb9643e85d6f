// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/eval.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include "graphrx/error.hpp"

namespace graphrx::kg {

namespace {

// Pessimistic rank of the true entity among eligible candidates.
int64_t rank_of(const std::vector<float>& scores, int64_t truth,
                const std::function<bool(int64_t)>& eligible) {
  float true_score = scores[size_t(truth)];
  int64_t rank = 1;
  for (int64_t e = 0; e < int64_t(scores.size()); ++e) {
    if (e == truth || !eligible(e)) continue;
    if (scores[size_t(e)] >= true_score) ++rank;
  }
  return rank;
}

DirectionMetrics from_ranks(std::span<const int64_t> ranks) {
  DirectionMetrics m;
  if (ranks.empty()) return m;
  // Integer and rational sums stay exact until the final division.
  int64_t sum = 0, h1 = 0, h3 = 0, h10 = 0;
  double reciprocal = 0;
  for (int64_t rank : ranks) {
    sum += rank;
    reciprocal += 1.0 / double(rank);
    h1 += rank <= 1;
    h3 += rank <= 3;
    h10 += rank <= 10;
  }
  double n = double(ranks.size());
  m.mr = double(sum) / n;
  m.mrr = reciprocal / n;
  m.hits1 = double(h1) / n;
  m.hits3 = double(h3) / n;
  m.hits10 = double(h10) / n;
  return m;
}

}  // namespace

EvalReport evaluate_ranking(const TripletStore& store, const EmbeddingModel& model,
                            std::span<const Triple> triples, bool filtered, int num_threads) {
  if (triples.empty()) throw ContractError("evaluation split is empty");
  size_t n = triples.size();
  std::vector<int64_t> head_ranks(n), tail_ranks(n);

  auto worker = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const Triple& triple = triples[i];
      std::vector<float> tail_scores = model.score_all_tails(triple.head, triple.relation);
      tail_ranks[i] = rank_of(tail_scores, triple.tail, [&](int64_t e) {
        return !filtered || !store.known_fact(triple.head, triple.relation, e);
      });
      std::vector<float> head_scores = model.score_all_heads(triple.relation, triple.tail);
      head_ranks[i] = rank_of(head_scores, triple.head, [&](int64_t e) {
        return !filtered || !store.known_fact(e, triple.relation, triple.tail);
      });
    }
  };

  int threads = std::max(1, num_threads);
  if (threads == 1) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (n + size_t(threads) - 1) / size_t(threads);
    for (int t = 0; t < threads; ++t) {
      size_t begin = size_t(t) * chunk;
      if (begin >= n) break;
      pool.emplace_back(worker, begin, std::min(n, begin + chunk));
    }
    for (auto& thread : pool) thread.join();
  }

  EvalReport report;
  report.triple_count = int64_t(n);
  report.filtered = filtered;
  report.head = from_ranks(head_ranks);
  report.tail = from_ranks(tail_ranks);
  std::vector<int64_t> pooled;
  pooled.reserve(2 * n);
  pooled.insert(pooled.end(), head_ranks.begin(), head_ranks.end());
  pooled.insert(pooled.end(), tail_ranks.begin(), tail_ranks.end());
  report.combined = from_ranks(pooled);
  return report;
}

EvalReport evaluate_split(const TripletStore& store, const EmbeddingModel& model, Split split,
                          bool filtered, int num_threads) {
  return evaluate_ranking(store, model, store.split(split), filtered, num_threads);
}

std::vector<ScoredEntity> query_topk(const TripletStore& store, const EmbeddingModel& model,
                                     const std::string& head, const std::string& relation,
                                     int64_t k, bool include_known) {
  if (k < 1) throw ContractError("k must be at least 1");
  int64_t h = store.entity_id(head);
  int64_t r = store.relation_id(relation);
  std::vector<float> scores = model.score_all_tails(h, r);
  std::vector<ScoredEntity> candidates;
  for (int64_t e = 0; e < store.num_entities(); ++e) {
    if (!include_known && store.known_fact(h, r, e)) continue;
    candidates.push_back({e, scores[size_t(e)]});
  }
  std::sort(candidates.begin(), candidates.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
  if (int64_t(candidates.size()) > k) candidates.resize(size_t(k));
  return candidates;
}

}  // namespace graphrx::kg
