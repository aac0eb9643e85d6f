// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/gnn/layers.hpp"

#include <cmath>

#include "graphrx/error.hpp"

namespace graphrx::gnn {

namespace {

Var maybe_watch(Tape* tape, Parameter& p) { return tape ? tape->watch(p) : Var(p.value); }

// Per-row constant multiplier materialized to the feature width, since
// the elementwise broadcast rules do not cover column vectors.
Tensor spread_rows(const std::vector<float>& per_row, int64_t width) {
  Tensor out = Tensor::zeros({int64_t(per_row.size()), width});
  auto data = out.mutable_data();
  for (size_t i = 0; i < per_row.size(); ++i)
    for (int64_t j = 0; j < width; ++j) data[i * size_t(width) + size_t(j)] = per_row[i];
  return out;
}

}  // namespace

Var gcn_propagate(const Var& weight, const Var& bias, const PackedGraph& pg, const Var& H) {
  if (H.value.rank() != 2 || H.value.extent(0) != pg.total_nodes())
    throw DimensionError("feature rows " + H.value.shape_string() + " do not cover " +
                         std::to_string(pg.total_nodes()) + " nodes");
  if (H.value.extent(1) != weight.value.extent(0))
    throw DimensionError("gcn width mismatch: features " + H.value.shape_string() +
                         " vs weight " + weight.value.shape_string());

  int64_t n = pg.total_nodes();
  std::vector<float> degree(size_t(n), 1.f);  // virtual self-loop
  for (const Edge& e : pg.edges()) degree[size_t(e.tail)] += 1.f;

  Var hw = matmul(H, weight);
  int64_t width = hw.value.extent(1);

  std::vector<int64_t> heads, tails;
  heads.reserve(pg.edges().size());
  tails.reserve(pg.edges().size());
  std::vector<float> edge_coeff(pg.edges().size());
  for (size_t i = 0; i < pg.edges().size(); ++i) {
    const Edge& e = pg.edges()[i];
    heads.push_back(e.head);
    tails.push_back(e.tail);
    edge_coeff[i] = 1.f / std::sqrt(degree[size_t(e.head)] * degree[size_t(e.tail)]);
  }
  std::vector<float> self_coeff(static_cast<size_t>(n));
  for (int64_t v = 0; v < n; ++v) self_coeff[size_t(v)] = 1.f / degree[size_t(v)];

  Var messages = mul(gather_rows(hw, heads), Var(spread_rows(edge_coeff, width)));
  Var aggregated = scatter_add_rows(messages, tails, n);
  Var self_term = mul(hw, Var(spread_rows(self_coeff, width)));
  return add(add(aggregated, self_term), bias);
}

Var gin_propagate(const Var& w1, const Var& b1, const Var& w2, const Var& b2, const Var& eps,
                  const PackedGraph& pg, const Var& H) {
  if (H.value.rank() != 2 || H.value.extent(0) != pg.total_nodes())
    throw DimensionError("feature rows " + H.value.shape_string() + " do not cover " +
                         std::to_string(pg.total_nodes()) + " nodes");
  if (H.value.extent(1) != w1.value.extent(0))
    throw DimensionError("gin width mismatch: features " + H.value.shape_string() +
                         " vs weight " + w1.value.shape_string());

  std::vector<int64_t> heads, tails;
  for (const Edge& e : pg.edges()) {
    heads.push_back(e.head);
    tails.push_back(e.tail);
  }
  Var neighbor_sum = scatter_add_rows(gather_rows(H, heads), tails, pg.total_nodes());
  Var self_scale = add(Var(Tensor::scalar(1.f)), eps);
  Var combined = add(mul(H, self_scale), neighbor_sum);
  Var hidden = relu(add(matmul(combined, w1), b1));
  return add(matmul(hidden, w2), b2);
}

ReadoutKind readout_kind_from_string(const std::string& name) {
  if (name == "sum") return ReadoutKind::sum;
  if (name == "mean") return ReadoutKind::mean;
  throw ConfigError("unknown readout \"" + name + "\" (expected sum or mean)");
}

Var readout(const PackedGraph& pg, const Var& H, ReadoutKind kind, int* empty_member_warnings) {
  if (H.value.rank() != 2 || H.value.extent(0) != pg.total_nodes())
    throw DimensionError("feature rows " + H.value.shape_string() + " do not cover " +
                         std::to_string(pg.total_nodes()) + " nodes");
  int64_t width = H.value.extent(1);
  Var sums = scatter_add_rows(H, pg.node_graph_id_list(), pg.num_graphs());
  if (kind == ReadoutKind::sum) return sums;

  std::vector<float> inverse_count(static_cast<size_t>(pg.num_graphs()));
  for (int64_t g = 0; g < pg.num_graphs(); ++g) {
    int64_t count = pg.nodes_of(g);
    if (count == 0 && empty_member_warnings) ++*empty_member_warnings;
    inverse_count[size_t(g)] = count > 0 ? 1.f / float(count) : 0.f;
  }
  return mul(sums, Var(spread_rows(inverse_count, width)));
}

Tensor affine_init(Rng& rng, int64_t fan_in, int64_t fan_out) {
  float bound = 1.f / std::sqrt(float(fan_in));
  Tensor w = Tensor::zeros({fan_in, fan_out});
  for (float& v : w.mutable_data()) v = rng.uniform(-bound, bound);
  return w;
}

GCNLayer::GCNLayer(const std::string& name, int64_t d_in, int64_t d_out, Rng& rng)
    : weight(name + ".weight", affine_init(rng, d_in, d_out)),
      bias(name + ".bias", Tensor::zeros({d_out})) {}

Var GCNLayer::forward(Tape* tape, const PackedGraph& pg, const Var& H) {
  return gcn_propagate(maybe_watch(tape, weight), maybe_watch(tape, bias), pg, H);
}

GINLayer::GINLayer(const std::string& name, int64_t d_in, int64_t d_hidden, int64_t d_out,
                   Rng& rng, bool learn)
    : mlp_w1(name + ".mlp.w1", affine_init(rng, d_in, d_hidden)),
      mlp_b1(name + ".mlp.b1", Tensor::zeros({d_hidden})),
      mlp_w2(name + ".mlp.w2", affine_init(rng, d_hidden, d_out)),
      mlp_b2(name + ".mlp.b2", Tensor::zeros({d_out})),
      epsilon(name + ".epsilon", Tensor::scalar(0.f)),
      learn_epsilon(learn) {}

Var GINLayer::forward(Tape* tape, const PackedGraph& pg, const Var& H) {
  Var eps = learn_epsilon ? maybe_watch(tape, epsilon) : Var(epsilon.value);
  return gin_propagate(maybe_watch(tape, mlp_w1), maybe_watch(tape, mlp_b1),
                       maybe_watch(tape, mlp_w2), maybe_watch(tape, mlp_b2), eps, pg, H);
}

}  // namespace graphrx::gnn
