// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/gnn/property.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "graphrx/error.hpp"
#include "graphrx/smiles.hpp"

namespace graphrx::gnn {

LayerKind layer_kind_from_string(const std::string& name) {
  if (name == "gcn") return LayerKind::gcn;
  if (name == "gin") return LayerKind::gin;
  throw ConfigError("unknown layer kind \"" + name + "\" (expected gcn or gin)");
}

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "binary") return TaskKind::binary_classification;
  if (name == "regression") return TaskKind::regression;
  throw ConfigError("unknown task kind \"" + name + "\" (expected binary or regression)");
}

SplitKind split_kind_from_string(const std::string& name) {
  if (name == "random") return SplitKind::random;
  if (name == "scaffold") return SplitKind::scaffold;
  throw ConfigError("unknown split kind \"" + name + "\" (expected random or scaffold)");
}

std::string to_string(LayerKind kind) { return kind == LayerKind::gcn ? "gcn" : "gin"; }

std::string to_string(TaskKind kind) {
  return kind == TaskKind::binary_classification ? "binary" : "regression";
}

PropertyModel::PropertyModel(const PropertyConfig& config)
    : config_(config),
      head_weight_("head.weight", Tensor::zeros({0})),
      head_bias_("head.bias", Tensor::zeros({1})) {
  if (config.num_layers < 1) throw ConfigError("property model needs at least one layer");
  Rng rng(config.seed);
  int64_t width = config.input_dim;
  for (int64_t i = 0; i < config.num_layers; ++i) {
    std::string name = "layer" + std::to_string(i);
    if (config.layer == LayerKind::gcn) {
      gcn_layers_.emplace_back(name, width, config.hidden, rng);
    } else {
      gin_layers_.emplace_back(name, width, config.hidden, config.hidden, rng);
    }
    width = config.hidden;
  }
  head_weight_ = Parameter("head.weight", affine_init(rng, width, 1));
}

Var PropertyModel::forward(Tape* tape, const PackedGraph& batch) {
  return forward_features(tape, batch, Var(featurize_atoms(batch)));
}

Var PropertyModel::forward_features(Tape* tape, const PackedGraph& batch, const Var& features) {
  Var h = features;
  for (int64_t i = 0; i < config_.num_layers; ++i) {
    if (config_.layer == LayerKind::gcn) {
      h = gcn_layers_[size_t(i)].forward(tape, batch, h);
    } else {
      h = gin_layers_[size_t(i)].forward(tape, batch, h);
    }
    h = relu(h);
  }
  Var pooled = readout(batch, h, config_.readout);
  Var head_w = tape ? tape->watch(head_weight_) : Var(head_weight_.value);
  Var head_b = tape ? tape->watch(head_bias_) : Var(head_bias_.value);
  return reduce_sum(add(matmul(pooled, head_w), head_b), 1);
}

std::vector<Parameter*> PropertyModel::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : gcn_layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  for (auto& layer : gin_layers_) {
    out.push_back(&layer.mlp_w1);
    out.push_back(&layer.mlp_b1);
    out.push_back(&layer.mlp_w2);
    out.push_back(&layer.mlp_b2);
    if (layer.learn_epsilon) out.push_back(&layer.epsilon);
  }
  out.push_back(&head_weight_);
  out.push_back(&head_bias_);
  return out;
}

std::vector<Tensor> PropertyModel::state() const {
  std::vector<Tensor> out;
  auto self = const_cast<PropertyModel*>(this);
  for (Parameter* p : self->parameters()) out.push_back(p->value);
  return out;
}

void PropertyModel::load_state(const std::vector<Tensor>& tensors) {
  auto params = parameters();
  if (tensors.size() != params.size())
    throw CheckpointError("state holds " + std::to_string(tensors.size()) + " tensors, model has " +
                          std::to_string(params.size()) + " parameters");
  for (size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->value.same_shape(tensors[i]))
      throw CheckpointError("state tensor " + std::to_string(i) + " shape " +
                            tensors[i].shape_string() + " does not match parameter \"" +
                            params[i]->name + "\" " + params[i]->value.shape_string());
    params[i]->value = tensors[i];
  }
}

SplitIndices split_dataset(const PropertyDataset& dataset, const SplitSpec& spec) {
  if (dataset.size() == 0) throw ContractError("dataset is empty");
  if (spec.train_fraction <= 0 || spec.valid_fraction <= 0 || spec.test_fraction <= 0)
    throw ConfigError("split fractions must be positive");
  double sum = spec.train_fraction + spec.valid_fraction + spec.test_fraction;
  if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");

  int64_t n = dataset.size();
  int64_t train_target = int64_t(std::llround(spec.train_fraction * double(n)));
  int64_t valid_target = int64_t(std::llround(spec.valid_fraction * double(n)));

  SplitIndices out;
  if (spec.kind == SplitKind::random) {
    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    rng.shuffle(order);
    for (int64_t i = 0; i < n; ++i) {
      if (i < train_target)
        out.train.push_back(order[size_t(i)]);
      else if (i < train_target + valid_target)
        out.valid.push_back(order[size_t(i)]);
      else
        out.test.push_back(order[size_t(i)]);
    }
  } else {
    // Group by written scaffold, largest groups first (ties by key).
    std::map<std::string, std::vector<int64_t>> groups;
    for (int64_t i = 0; i < n; ++i) {
      Molecule m = Molecule::from_graph(dataset.molecules[size_t(i)]);
      groups[to_smiles(murcko_scaffold(m))].push_back(i);
    }
    std::vector<std::pair<std::string, std::vector<int64_t>>> ordered(groups.begin(),
                                                                      groups.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
      return a.first < b.first;
    });
    for (auto& [key, members] : ordered) {
      std::vector<int64_t>* bucket;
      if (int64_t(out.train.size()) < train_target)
        bucket = &out.train;
      else if (int64_t(out.valid.size()) < valid_target)
        bucket = &out.valid;
      else
        bucket = &out.test;
      bucket->insert(bucket->end(), members.begin(), members.end());
    }
  }
  if (out.train.empty() || out.valid.empty() || out.test.empty())
    throw ConfigError("split produced an empty subset (train " +
                      std::to_string(out.train.size()) + ", valid " +
                      std::to_string(out.valid.size()) + ", test " +
                      std::to_string(out.test.size()) + ")");
  return out;
}

namespace {

PackedGraph pack_subset(const PropertyDataset& dataset, std::span<const int64_t> indices) {
  std::vector<Graph> graphs;
  graphs.reserve(indices.size());
  for (int64_t i : indices) graphs.push_back(dataset.molecules[size_t(i)]);
  return PackedGraph::pack(graphs);
}

Tensor labels_of(const PropertyDataset& dataset, std::span<const int64_t> indices) {
  std::vector<float> values;
  values.reserve(indices.size());
  for (int64_t i : indices) values.push_back(dataset.labels[size_t(i)]);
  return Tensor::from_data({int64_t(indices.size())}, std::move(values));
}

Var task_loss(TaskKind task, const Var& outputs, const Tensor& labels) {
  Var y(labels);
  if (task == TaskKind::binary_classification) {
    // softplus(z) - z*y == BCE-with-logits for y in {0, 1}
    return reduce_mean(sub(softplus(outputs), mul(outputs, y)));
  }
  Var diff = sub(outputs, y);
  return reduce_mean(mul(diff, diff));
}

std::vector<float> predict(PropertyModel& model, const PropertyDataset& dataset,
                           std::span<const int64_t> indices) {
  if (indices.empty()) return {};
  PackedGraph batch = pack_subset(dataset, indices);
  Var out = model.forward(nullptr, batch);
  return {out.value.data().begin(), out.value.data().end()};
}

double valid_metric_of(TaskKind task, const PropertyMetrics& m) {
  if (task == TaskKind::binary_classification) return m.auroc.value_or(0.5);
  return m.rmse;
}

bool better(TaskKind task, double candidate, double incumbent) {
  if (task == TaskKind::binary_classification) return candidate > incumbent;
  return candidate < incumbent;
}

}  // namespace

std::optional<double> auroc(std::span<const float> scores, std::span<const float> labels) {
  int64_t positives = 0, negatives = 0;
  for (float y : labels) (y > 0.5f ? positives : negatives)++;
  if (positives == 0 || negatives == 0) return std::nullopt;
  // Pairwise count with half credit for ties: identical to the trapezoid
  // over the exact ROC curve.
  double credit = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] <= 0.5f) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] > 0.5f) continue;
      if (scores[i] > scores[j])
        credit += 1;
      else if (scores[i] == scores[j])
        credit += 0.5;
    }
  }
  return credit / (double(positives) * double(negatives));
}

PropertyMetrics evaluate_property(PropertyModel& model, const PropertyDataset& dataset,
                                  const std::vector<int64_t>& indices) {
  if (indices.empty()) throw ContractError("evaluation subset is empty");
  std::vector<float> outputs = predict(model, dataset, indices);
  std::vector<float> labels;
  labels.reserve(indices.size());
  for (int64_t i : indices) labels.push_back(dataset.labels[size_t(i)]);

  PropertyMetrics metrics;
  metrics.count = int64_t(indices.size());
  if (model.config().task == TaskKind::binary_classification) {
    metrics.auroc = auroc(outputs, labels);
    int64_t correct = 0;
    for (size_t i = 0; i < outputs.size(); ++i) {
      bool predicted = outputs[i] > 0.f;  // sigmoid(z) > 0.5
      if (predicted == (labels[i] > 0.5f)) ++correct;
    }
    metrics.accuracy = double(correct) / double(outputs.size());
  } else {
    double se = 0, ae = 0;
    for (size_t i = 0; i < outputs.size(); ++i) {
      double diff = double(outputs[i]) - double(labels[i]);
      se += diff * diff;
      ae += std::fabs(diff);
    }
    metrics.rmse = std::sqrt(se / double(outputs.size()));
    metrics.mae = ae / double(outputs.size());
  }
  return metrics;
}

PropertyTrainResult train_property(const PropertyDataset& dataset, PropertyModel& model,
                                   const SplitIndices& split, const PropertyTrainConfig& config,
                                   const std::function<void(int64_t, const EpochRecord&)>& on_epoch) {
  if (split.train.empty()) throw ContractError("train subset is empty");
  if (config.batch_size < 1) throw ConfigError("batch size must be positive");
  TaskKind task = model.config().task;
  if (task == TaskKind::binary_classification) {
    for (int64_t i : split.train) {
      float y = dataset.labels[size_t(i)];
      if (y != 0.f && y != 1.f)
        throw ConfigError("binary task labels must be 0 or 1, found " + std::to_string(y));
    }
  }

  Rng rng(config.seed);
  auto params = model.parameters();
  OptimOptions optim{OptimizerKind::adam, config.lr};

  PropertyTrainResult result;
  result.best_state = model.state();
  PropertyMetrics init_metrics = evaluate_property(model, dataset, split.valid);
  double best_metric = valid_metric_of(task, init_metrics);

  std::vector<int64_t> order = split.train;
  for (int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    int64_t batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += size_t(config.batch_size)) {
      size_t end = std::min(order.size(), begin + size_t(config.batch_size));
      std::span<const int64_t> batch_indices(order.data() + begin, end - begin);
      PackedGraph batch = pack_subset(dataset, batch_indices);
      Tensor labels = labels_of(dataset, batch_indices);

      Tape tape;
      Var outputs = model.forward(&tape, batch);
      Var loss = task_loss(task, outputs, labels);
      float loss_value = loss.value.item();
      if (!std::isfinite(loss_value))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batches));
      zero_grad(params);
      tape.backward(loss);
      optimizer_step(params, optim);
      epoch_loss += loss_value;
      ++batches;
    }

    EpochRecord record;
    record.train_loss = float(epoch_loss / double(batches));
    PropertyMetrics valid = evaluate_property(model, dataset, split.valid);
    record.valid_metric = valid_metric_of(task, valid);
    result.curve.push_back(record);
    if (better(task, record.valid_metric, best_metric)) {
      best_metric = record.valid_metric;
      result.best_epoch = epoch;
      result.best_state = model.state();
    }
    if (on_epoch) on_epoch(epoch, record);
  }
  return result;
}

}  // namespace graphrx::gnn
