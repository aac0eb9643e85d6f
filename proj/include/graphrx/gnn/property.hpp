// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>

#include "graphrx/gnn/layers.hpp"
#include "graphrx/molecule.hpp"
#include "graphrx/optim.hpp"

namespace graphrx::gnn {

enum class LayerKind { gcn, gin };
enum class TaskKind { binary_classification, regression };

LayerKind layer_kind_from_string(const std::string& name);
TaskKind task_kind_from_string(const std::string& name);
std::string to_string(LayerKind kind);
std::string to_string(TaskKind kind);

struct PropertyConfig {
  LayerKind layer = LayerKind::gin;
  int64_t num_layers = 2;
  int64_t hidden = 32;
  ReadoutKind readout = ReadoutKind::sum;
  TaskKind task = TaskKind::binary_classification;
  int64_t input_dim = kAtomFeatureDim;
  uint64_t seed = 0;
};

/// Message-passing stack + readout + affine head over molecule batches.
/// Binary tasks emit one logit per graph; regression one value.
class PropertyModel {
public:
  explicit PropertyModel(const PropertyConfig& config);

  const PropertyConfig& config() const { return config_; }

  /// Per-graph outputs, rank-1. Featurization happens inside: the batch
  /// must carry the molecule attribute schema.
  Var forward(Tape* tape, const PackedGraph& batch);
  Var forward_features(Tape* tape, const PackedGraph& batch, const Var& features);

  std::vector<Parameter*> parameters();
  std::vector<Tensor> state() const;
  void load_state(const std::vector<Tensor>& tensors);

private:
  PropertyConfig config_;
  std::vector<GCNLayer> gcn_layers_;
  std::vector<GINLayer> gin_layers_;
  Parameter head_weight_;
  Parameter head_bias_;
};

struct PropertyDataset {
  std::vector<Graph> molecules;  // molecule-schema graphs
  std::vector<float> labels;
  std::vector<std::string> smiles;  // aligned with molecules; may be empty

  int64_t size() const { return int64_t(molecules.size()); }
};

enum class SplitKind { random, scaffold };

SplitKind split_kind_from_string(const std::string& name);

struct SplitSpec {
  SplitKind kind = SplitKind::random;
  double train_fraction = 0.8;
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<int64_t> train, valid, test;
};

/// Random: seeded shuffle then fraction cut. Scaffold: group molecules by
/// their written Murcko scaffold, order groups by descending size (ties
/// by key), fill train, then valid, then test. Empty resulting splits are
/// a configuration error.
SplitIndices split_dataset(const PropertyDataset& dataset, const SplitSpec& spec);

struct PropertyMetrics {
  std::optional<double> auroc;  // absent when only one class is present
  double accuracy = 0;          // binary tasks, threshold 0.5
  double rmse = 0;              // regression tasks
  double mae = 0;
  int64_t count = 0;
};

struct PropertyTrainConfig {
  int64_t epochs = 50;
  int64_t batch_size = 32;
  float lr = 0.01f;
  uint64_t seed = 0;
};

struct EpochRecord {
  float train_loss = 0;
  double valid_metric = 0;  // auroc (binary) or rmse (regression)
};

struct PropertyTrainResult {
  std::vector<EpochRecord> curve;
  int64_t best_epoch = -1;        // -1 = initialization
  std::vector<Tensor> best_state;  // parameters at the best-valid epoch
};

/// Mini-batch training with binary cross-entropy (from logits) or mean
/// squared error. The model is left at its final state; best_state holds
/// the best-valid parameters for checkpointing.
PropertyTrainResult train_property(
    const PropertyDataset& dataset, PropertyModel& model, const SplitIndices& split,
    const PropertyTrainConfig& config,
    const std::function<void(int64_t, const EpochRecord&)>& on_epoch = {});

PropertyMetrics evaluate_property(PropertyModel& model, const PropertyDataset& dataset,
                                  const std::vector<int64_t>& indices);

/// Exact pairwise AUROC with half-credit for score ties; absent when a
/// class is missing.
std::optional<double> auroc(std::span<const float> scores, std::span<const float> labels);

}  // namespace graphrx::gnn
