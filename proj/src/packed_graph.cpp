// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/packed_graph.hpp"

#include <numeric>

#include "graphrx/error.hpp"

namespace graphrx {

namespace {

AttrTable concat_tables(const std::vector<const AttrTable*>& tables) {
  AttrTable out;
  if (tables.empty()) return out;
  for (const auto& [name, first] : *tables[0]) {
    std::vector<Tensor> parts;
    parts.reserve(tables.size());
    for (const AttrTable* t : tables) parts.push_back(t->at(name));
    out.emplace(name, Tensor::concat_rows(parts));
  }
  return out;
}

}  // namespace

PackedGraph PackedGraph::pack(const std::vector<Graph>& graphs) {
  PackedGraph pg;
  if (graphs.empty()) return pg;

  AttributeRegistry registry = AttributeRegistry::of(graphs[0]);
  for (size_t i = 1; i < graphs.size(); ++i) {
    AttributeRegistry other = AttributeRegistry::of(graphs[i]);
    if (!(registry == other))
      throw SchemaError("pack registry mismatch at member " + std::to_string(i) + ": " +
                        registry.describe_mismatch(other));
  }
  pg.num_relations_ = registry.num_relations;

  std::vector<const AttrTable*> node_tables, edge_tables;
  std::vector<std::vector<Tensor>> graph_parts;  // one vector per attribute
  for (const Graph& g : graphs) {
    int64_t base = pg.node_offsets_.back();
    for (const Edge& e : g.edges())
      pg.edges_.emplace_back(e.head + base, e.tail + base, e.relation);
    pg.node_offsets_.push_back(base + g.num_nodes());
    pg.edge_offsets_.push_back(pg.edge_offsets_.back() + g.num_edges());
    node_tables.push_back(&g.node_attrs());
    edge_tables.push_back(&g.edge_attrs());
  }
  pg.node_attrs_ = concat_tables(node_tables);
  pg.edge_attrs_ = concat_tables(edge_tables);
  for (const auto& [name, entry] : registry.graph) {
    std::vector<Tensor> parts;
    parts.reserve(graphs.size());
    for (const Graph& g : graphs) parts.push_back(g.graph_attr(name));
    pg.graph_attrs_.emplace(name, Tensor::stack(parts));
  }
  return pg;
}

Graph PackedGraph::member(int64_t i) const {
  if (i < 0 || i >= num_graphs()) throw IndexError("member index " + std::to_string(i) + " out of range");
  int64_t n0 = node_offsets_[size_t(i)], n1 = node_offsets_[size_t(i + 1)];
  int64_t e0 = edge_offsets_[size_t(i)], e1 = edge_offsets_[size_t(i + 1)];
  std::vector<Edge> edges;
  edges.reserve(size_t(e1 - e0));
  for (int64_t e = e0; e < e1; ++e) {
    const Edge& old = edges_[size_t(e)];
    edges.emplace_back(old.head - n0, old.tail - n0, old.relation);
  }
  AttrTable node_attrs, edge_attrs, graph_attrs;
  for (const auto& [name, t] : node_attrs_) node_attrs.emplace(name, t.slice_rows(n0, n1));
  for (const auto& [name, t] : edge_attrs_) edge_attrs.emplace(name, t.slice_rows(e0, e1));
  for (const auto& [name, t] : graph_attrs_) graph_attrs.emplace(name, t.index_batch(i));
  return Graph::build(n1 - n0, std::move(edges), num_relations_, std::move(node_attrs),
                      std::move(edge_attrs), std::move(graph_attrs));
}

std::vector<Graph> PackedGraph::unpack() const {
  std::vector<Graph> out;
  out.reserve(size_t(num_graphs()));
  for (int64_t i = 0; i < num_graphs(); ++i) out.push_back(member(i));
  return out;
}

PackedGraph PackedGraph::repeat(int64_t k) const {
  if (k < 0) throw ContractError("repeat count must be non-negative");
  std::vector<int64_t> which;
  which.reserve(size_t(k * num_graphs()));
  for (int64_t r = 0; r < k; ++r)
    for (int64_t i = 0; i < num_graphs(); ++i) which.push_back(i);
  return select(which);
}

PackedGraph PackedGraph::select(const std::vector<int64_t>& which) const {
  for (int64_t i : which)
    if (i < 0 || i >= num_graphs())
      throw IndexError("select index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(num_graphs()) + ")");
  PackedGraph pg;
  pg.num_relations_ = num_relations_;

  std::vector<int64_t> node_rows, edge_rows;
  for (int64_t i : which) {
    int64_t n0 = node_offsets_[size_t(i)], n1 = node_offsets_[size_t(i + 1)];
    int64_t e0 = edge_offsets_[size_t(i)], e1 = edge_offsets_[size_t(i + 1)];
    int64_t base = pg.node_offsets_.back();
    for (int64_t e = e0; e < e1; ++e) {
      const Edge& old = edges_[size_t(e)];
      pg.edges_.emplace_back(old.head - n0 + base, old.tail - n0 + base, old.relation);
    }
    pg.node_offsets_.push_back(base + (n1 - n0));
    pg.edge_offsets_.push_back(pg.edge_offsets_.back() + (e1 - e0));
    for (int64_t r = n0; r < n1; ++r) node_rows.push_back(r);
    for (int64_t r = e0; r < e1; ++r) edge_rows.push_back(r);
  }
  auto gather_table = [](const AttrTable& table, const std::vector<int64_t>& rows) {
    AttrTable out;
    for (const auto& [name, t] : table) {
      int64_t w = t.row_size();
      std::vector<int64_t> shape = t.shape();
      shape[0] = int64_t(rows.size());
      std::vector<float> data(static_cast<size_t>(int64_t(rows.size()) * w));
      auto src = t.data();
      for (size_t r = 0; r < rows.size(); ++r)
        std::copy(src.begin() + long(rows[r] * w), src.begin() + long((rows[r] + 1) * w),
                  data.begin() + long(int64_t(r) * w));
      out.emplace(name, Tensor::from_data(std::move(shape), std::move(data)));
    }
    return out;
  };
  pg.node_attrs_ = gather_table(node_attrs_, node_rows);
  pg.edge_attrs_ = gather_table(edge_attrs_, edge_rows);
  for (const auto& [name, t] : graph_attrs_) {
    std::vector<Tensor> parts;
    parts.reserve(which.size());
    for (int64_t i : which) parts.push_back(t.index_batch(i));
    pg.graph_attrs_.emplace(name, Tensor::stack(parts));
  }
  return pg;
}

Tensor PackedGraph::node_graph_ids() const {
  auto ids = node_graph_id_list();
  std::vector<float> data(ids.begin(), ids.end());
  return Tensor::from_data({int64_t(ids.size())}, std::move(data));
}

std::vector<int64_t> PackedGraph::node_graph_id_list() const {
  std::vector<int64_t> ids(static_cast<size_t>(total_nodes()));
  for (int64_t g = 0; g < num_graphs(); ++g)
    for (int64_t n = node_offsets_[size_t(g)]; n < node_offsets_[size_t(g + 1)]; ++n)
      ids[size_t(n)] = g;
  return ids;
}

const Tensor& PackedGraph::node_attr(const std::string& name) const {
  auto it = node_attrs_.find(name);
  if (it == node_attrs_.end()) throw SchemaError("unknown node attribute \"" + name + "\"");
  return it->second;
}

const Tensor& PackedGraph::edge_attr(const std::string& name) const {
  auto it = edge_attrs_.find(name);
  if (it == edge_attrs_.end()) throw SchemaError("unknown edge attribute \"" + name + "\"");
  return it->second;
}

bool PackedGraph::operator==(const PackedGraph& other) const {
  return node_offsets_ == other.node_offsets_ && edge_offsets_ == other.edge_offsets_ &&
         edges_ == other.edges_ && num_relations_ == other.num_relations_ &&
         tables_bit_equal(node_attrs_, other.node_attrs_) &&
         tables_bit_equal(edge_attrs_, other.edge_attrs_) &&
         tables_bit_equal(graph_attrs_, other.graph_attrs_);
}

PackedGraph split_components(const Graph& g) {
  auto [ids, count] = g.connected_components();
  std::vector<Graph> members;
  members.reserve(size_t(count));
  for (int64_t c = 0; c < count; ++c) {
    std::vector<bool> keep(static_cast<size_t>(g.num_nodes()));
    for (int64_t i = 0; i < g.num_nodes(); ++i) keep[size_t(i)] = ids[size_t(i)] == c;
    members.push_back(g.node_mask(keep));
  }
  return PackedGraph::pack(members);
}

}  // namespace graphrx
