// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "graphrx/optim.hpp"
#include "graphrx/tape.hpp"

namespace graphrx::kg {

enum class ModelKind { transe, distmult, complex_, rotate, simple };

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::transe;
  int64_t dim = 32;
  uint64_t seed = 0;
};

/// Per-model embedding tables.
///
/// Layouts: transe/distmult use [E x d] and [R x d]. complex and rotate
/// store entities as [E x 2d] with real parts in the first d columns and
/// imaginary parts in the second. complex relations are [R x 2d]; rotate
/// relations are d phases in (-pi, pi], unit-modulus multipliers by
/// construction. simple splits entities into head/tail halves [E x 2d]
/// and learns distinct inverse-relation rows: [2R x d].
class EmbeddingModel {
public:
  EmbeddingModel(const ModelConfig& config, int64_t num_entities, int64_t num_relations);

  ModelKind kind() const { return config_.kind; }
  int64_t dim() const { return config_.dim; }
  const ModelConfig& config() const { return config_; }
  int64_t num_entities() const { return num_entities_; }
  int64_t num_relations() const { return num_relations_; }

  Parameter& entity_table() { return entity_; }
  Parameter& relation_table() { return relation_; }
  const Parameter& entity_table() const { return entity_; }
  const Parameter& relation_table() const { return relation_; }

  /// Differentiable batched score from watched table leaves; higher is
  /// more plausible. Returns a rank-1 tensor, one score per triple.
  Var score(const Var& entity_leaf, const Var& relation_leaf, const std::vector<int64_t>& heads,
            const std::vector<int64_t>& relations, const std::vector<int64_t>& tails) const;

  /// Scalar fast path; matches the batched path bit for bit.
  float score_one(int64_t head, int64_t relation, int64_t tail) const;
  std::vector<float> score_all_tails(int64_t head, int64_t relation) const;
  std::vector<float> score_all_heads(int64_t relation, int64_t tail) const;

  /// Post-step projection: transe renormalizes entity rows to unit L2;
  /// rotate wraps relation phases into (-pi, pi]. Other kinds no-op.
  void project();

private:
  void check_indices(const std::vector<int64_t>& heads, const std::vector<int64_t>& relations,
                     const std::vector<int64_t>& tails) const;

  ModelConfig config_;
  int64_t num_entities_;
  int64_t num_relations_;
  Parameter entity_;
  Parameter relation_;
};

}  // namespace graphrx::kg
