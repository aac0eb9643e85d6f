// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphrx/tensor.hpp"

namespace graphrx {

inline constexpr int64_t kNoRelation = -1;

struct Edge {
  int64_t head = 0;
  int64_t tail = 0;
  int64_t relation = kNoRelation;

  Edge() = default;
  Edge(int64_t h, int64_t t, int64_t r = kNoRelation) : head(h), tail(t), relation(r) {}
  bool operator==(const Edge&) const = default;
};

enum class Direction { in, out, both };

/// Ordered name -> tensor table; ordering keeps serialization stable.
using AttrTable = std::map<std::string, Tensor>;

/// Attributed directed multigraph. Node attributes have one row per node,
/// edge attributes one row per edge; graph attributes are free-form.
/// Immutable after build: every operation returns a new graph and carries
/// all attribute tables along with the surviving entities.
class Graph {
public:
  Graph() = default;

  /// Validates endpoints, relation range and attribute row counts.
  /// Self-loops and parallel edges are permitted.
  static Graph build(int64_t num_nodes, std::vector<Edge> edges, int64_t num_relations = 0,
                     AttrTable node_attrs = {}, AttrTable edge_attrs = {},
                     AttrTable graph_attrs = {});

  int64_t num_nodes() const { return num_nodes_; }
  int64_t num_edges() const { return int64_t(edges_.size()); }
  int64_t num_relations() const { return num_relations_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const AttrTable& node_attrs() const { return node_attrs_; }
  const AttrTable& edge_attrs() const { return edge_attrs_; }
  const AttrTable& graph_attrs() const { return graph_attrs_; }

  const Tensor& node_attr(const std::string& name) const;
  const Tensor& edge_attr(const std::string& name) const;
  const Tensor& graph_attr(const std::string& name) const;
  bool has_node_attr(const std::string& name) const { return node_attrs_.count(name) > 0; }
  bool has_edge_attr(const std::string& name) const { return edge_attrs_.count(name) > 0; }
  bool has_graph_attr(const std::string& name) const { return graph_attrs_.count(name) > 0; }

  /// Returns a copy with one attribute added or replaced.
  Graph with_node_attr(const std::string& name, Tensor value) const;
  Graph with_edge_attr(const std::string& name, Tensor value) const;
  Graph with_graph_attr(const std::string& name, Tensor value) const;

  /// Keeps nodes where keep[i]; survivors renumbered by ascending old
  /// index. Edges touching a dropped endpoint are silently removed.
  Graph node_mask(const std::vector<bool>& keep) const;

  /// Keeps edges where keep[e]; node set unchanged.
  Graph edge_mask(const std::vector<bool>& keep) const;

  /// Induced subgraph; nodes renumbered in the order given. Indices must
  /// be distinct and in range.
  Graph subgraph(const std::vector<int64_t>& nodes) const;

  /// Weakly connected components. Ids are dense, ordered by the smallest
  /// node index contained in each component.
  std::pair<std::vector<int64_t>, int64_t> connected_components() const;

  /// Per-node edge counts. A self-loop counts 1 in, 1 out, 2 both.
  Tensor degrees(Direction direction) const;

  /// Adds the reverse of every non-loop edge right after the original,
  /// duplicating its attribute row. Self-loops stay single.
  Graph to_undirected() const;

  bool operator==(const Graph& other) const;

private:
  int64_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  int64_t num_relations_ = 0;
  AttrTable node_attrs_;
  AttrTable edge_attrs_;
  AttrTable graph_attrs_;
};

/// Per-level attribute schema: name -> (row shape suffix, default fill).
/// Two graphs can be packed only if their registries agree.
struct AttributeRegistry {
  struct Entry {
    std::vector<int64_t> suffix;
    float fill = 0.f;
    bool operator==(const Entry&) const = default;
  };
  std::map<std::string, Entry> node;
  std::map<std::string, Entry> edge;
  std::map<std::string, Entry> graph;
  int64_t num_relations = 0;

  static AttributeRegistry of(const Graph& g);
  bool operator==(const AttributeRegistry&) const = default;
  /// Human-readable first difference, empty when equal.
  std::string describe_mismatch(const AttributeRegistry& other) const;
  /// Copy of g with every registered-but-missing attribute added at its
  /// default fill value.
  Graph ensure(const Graph& g) const;
};

bool tables_bit_equal(const AttrTable& a, const AttrTable& b);

}  // namespace graphrx
