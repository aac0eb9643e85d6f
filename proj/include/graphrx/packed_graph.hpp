// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphrx/graph.hpp"

namespace graphrx {

/// A batch of graphs concatenated into one structure. Edges use GLOBAL
/// node indices so batched message passing is a single gather/scatter;
/// unpack translates back to per-member local indices.
class PackedGraph {
public:
  PackedGraph() = default;

  /// Members must share one attribute registry (names, shape suffixes,
  /// relation vocabulary). Graph-level attributes are stacked with a
  /// leading batch extent.
  static PackedGraph pack(const std::vector<Graph>& graphs);

  /// Exact inverse of pack: structure and attributes round-trip bitwise.
  std::vector<Graph> unpack() const;

  /// Member i as a standalone graph with local indices.
  Graph member(int64_t i) const;

  /// Whole-batch repetition: members [a, b] with k = 2 give [a, b, a, b].
  PackedGraph repeat(int64_t k) const;

  /// New pack of the chosen members, in the given order; repeats allowed.
  PackedGraph select(const std::vector<int64_t>& which) const;

  /// Owner-graph index per node, non-decreasing.
  Tensor node_graph_ids() const;
  std::vector<int64_t> node_graph_id_list() const;

  int64_t num_graphs() const { return int64_t(node_offsets_.size()) - 1; }
  int64_t total_nodes() const { return node_offsets_.back(); }
  int64_t total_edges() const { return int64_t(edges_.size()); }
  int64_t num_relations() const { return num_relations_; }
  int64_t nodes_of(int64_t i) const { return node_offsets_[size_t(i + 1)] - node_offsets_[size_t(i)]; }
  int64_t edges_of(int64_t i) const { return edge_offsets_[size_t(i + 1)] - edge_offsets_[size_t(i)]; }
  const std::vector<int64_t>& node_offsets() const { return node_offsets_; }
  const std::vector<int64_t>& edge_offsets() const { return edge_offsets_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const AttrTable& node_attrs() const { return node_attrs_; }
  const AttrTable& edge_attrs() const { return edge_attrs_; }
  const AttrTable& graph_attrs() const { return graph_attrs_; }
  const Tensor& node_attr(const std::string& name) const;
  const Tensor& edge_attr(const std::string& name) const;

  bool operator==(const PackedGraph& other) const;

private:
  std::vector<int64_t> node_offsets_ = {0};
  std::vector<int64_t> edge_offsets_ = {0};
  std::vector<Edge> edges_;
  int64_t num_relations_ = 0;
  AttrTable node_attrs_;
  AttrTable edge_attrs_;
  AttrTable graph_attrs_;
};

/// One member graph per weakly connected component, ordered by component
/// id; attributes carried via the node_mask contract.
PackedGraph split_components(const Graph& g);

}  // namespace graphrx
