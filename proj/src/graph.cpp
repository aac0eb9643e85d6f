// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/graph.hpp"

#include <algorithm>
#include <numeric>

#include "graphrx/error.hpp"

namespace graphrx {

namespace {

void check_attr_rows(const AttrTable& table, int64_t expected, const char* level) {
  for (const auto& [name, tensor] : table) {
    if (tensor.rank() == 0 || tensor.extent(0) != expected) {
      throw DimensionError(std::string(level) + " attribute \"" + name + "\" has " +
                           (tensor.rank() == 0 ? std::string("scalar shape")
                                               : std::to_string(tensor.extent(0)) + " rows") +
                           ", expected " + std::to_string(expected));
    }
  }
}

// Gathers attribute rows in the order given by row_map.
AttrTable select_rows(const AttrTable& table, const std::vector<int64_t>& row_map) {
  AttrTable out;
  for (const auto& [name, tensor] : table) {
    int64_t w = tensor.row_size();
    std::vector<int64_t> shape = tensor.shape();
    shape[0] = int64_t(row_map.size());
    std::vector<float> data(static_cast<size_t>(int64_t(row_map.size()) * w));
    auto src = tensor.data();
    for (size_t r = 0; r < row_map.size(); ++r)
      std::copy(src.begin() + long(row_map[r] * w), src.begin() + long((row_map[r] + 1) * w),
                data.begin() + long(int64_t(r) * w));
    out.emplace(name, Tensor::from_data(std::move(shape), std::move(data)));
  }
  return out;
}

}  // namespace

Graph Graph::build(int64_t num_nodes, std::vector<Edge> edges, int64_t num_relations,
                   AttrTable node_attrs, AttrTable edge_attrs, AttrTable graph_attrs) {
  if (num_nodes < 0) throw ContractError("negative node count");
  for (const Edge& e : edges) {
    if (e.head < 0 || e.head >= num_nodes || e.tail < 0 || e.tail >= num_nodes)
      throw IndexError("edge endpoint (" + std::to_string(e.head) + ", " +
                       std::to_string(e.tail) + ") out of range [0, " +
                       std::to_string(num_nodes) + ")");
    if (num_relations > 0) {
      if (e.relation < 0 || e.relation >= num_relations)
        throw IndexError("edge relation " + std::to_string(e.relation) + " out of range [0, " +
                         std::to_string(num_relations) + ")");
    } else if (e.relation != kNoRelation) {
      throw IndexError("edge carries relation " + std::to_string(e.relation) +
                       " but the graph declares no relations");
    }
  }
  check_attr_rows(node_attrs, num_nodes, "node");
  check_attr_rows(edge_attrs, int64_t(edges.size()), "edge");

  Graph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = std::move(edges);
  g.num_relations_ = num_relations;
  g.node_attrs_ = std::move(node_attrs);
  g.edge_attrs_ = std::move(edge_attrs);
  g.graph_attrs_ = std::move(graph_attrs);
  return g;
}

const Tensor& Graph::node_attr(const std::string& name) const {
  auto it = node_attrs_.find(name);
  if (it == node_attrs_.end()) throw SchemaError("unknown node attribute \"" + name + "\"");
  return it->second;
}

const Tensor& Graph::edge_attr(const std::string& name) const {
  auto it = edge_attrs_.find(name);
  if (it == edge_attrs_.end()) throw SchemaError("unknown edge attribute \"" + name + "\"");
  return it->second;
}

const Tensor& Graph::graph_attr(const std::string& name) const {
  auto it = graph_attrs_.find(name);
  if (it == graph_attrs_.end()) throw SchemaError("unknown graph attribute \"" + name + "\"");
  return it->second;
}

Graph Graph::with_node_attr(const std::string& name, Tensor value) const {
  if (value.rank() == 0 || value.extent(0) != num_nodes_)
    throw DimensionError("node attribute \"" + name + "\" must have " +
                         std::to_string(num_nodes_) + " rows");
  Graph g = *this;
  g.node_attrs_[name] = std::move(value);
  return g;
}

Graph Graph::with_edge_attr(const std::string& name, Tensor value) const {
  if (value.rank() == 0 || value.extent(0) != num_edges())
    throw DimensionError("edge attribute \"" + name + "\" must have " +
                         std::to_string(num_edges()) + " rows");
  Graph g = *this;
  g.edge_attrs_[name] = std::move(value);
  return g;
}

Graph Graph::with_graph_attr(const std::string& name, Tensor value) const {
  Graph g = *this;
  g.graph_attrs_[name] = std::move(value);
  return g;
}

Graph Graph::node_mask(const std::vector<bool>& keep) const {
  if (int64_t(keep.size()) != num_nodes_)
    throw DimensionError("node mask length " + std::to_string(keep.size()) +
                         " does not match node count " + std::to_string(num_nodes_));
  std::vector<int64_t> new_index(static_cast<size_t>(num_nodes_), -1);
  std::vector<int64_t> kept_nodes;
  for (int64_t i = 0; i < num_nodes_; ++i) {
    if (keep[size_t(i)]) {
      new_index[size_t(i)] = int64_t(kept_nodes.size());
      kept_nodes.push_back(i);
    }
  }
  std::vector<Edge> edges;
  std::vector<int64_t> kept_edges;
  for (int64_t e = 0; e < num_edges(); ++e) {
    const Edge& old = edges_[size_t(e)];
    if (new_index[size_t(old.head)] >= 0 && new_index[size_t(old.tail)] >= 0) {
      edges.emplace_back(new_index[size_t(old.head)], new_index[size_t(old.tail)], old.relation);
      kept_edges.push_back(e);
    }
  }
  Graph g;
  g.num_nodes_ = int64_t(kept_nodes.size());
  g.edges_ = std::move(edges);
  g.num_relations_ = num_relations_;
  g.node_attrs_ = select_rows(node_attrs_, kept_nodes);
  g.edge_attrs_ = select_rows(edge_attrs_, kept_edges);
  g.graph_attrs_ = graph_attrs_;
  return g;
}

Graph Graph::edge_mask(const std::vector<bool>& keep) const {
  if (int64_t(keep.size()) != num_edges())
    throw DimensionError("edge mask length " + std::to_string(keep.size()) +
                         " does not match edge count " + std::to_string(num_edges()));
  std::vector<Edge> edges;
  std::vector<int64_t> kept_edges;
  for (int64_t e = 0; e < num_edges(); ++e) {
    if (keep[size_t(e)]) {
      edges.push_back(edges_[size_t(e)]);
      kept_edges.push_back(e);
    }
  }
  Graph g = *this;
  g.edges_ = std::move(edges);
  g.edge_attrs_ = select_rows(edge_attrs_, kept_edges);
  return g;
}

Graph Graph::subgraph(const std::vector<int64_t>& nodes) const {
  std::vector<int64_t> new_index(static_cast<size_t>(num_nodes_), -1);
  for (size_t pos = 0; pos < nodes.size(); ++pos) {
    int64_t n = nodes[pos];
    if (n < 0 || n >= num_nodes_)
      throw IndexError("subgraph node " + std::to_string(n) + " out of range");
    if (new_index[size_t(n)] >= 0)
      throw IndexError("subgraph node " + std::to_string(n) + " listed twice");
    new_index[size_t(n)] = int64_t(pos);
  }
  std::vector<Edge> edges;
  std::vector<int64_t> kept_edges;
  for (int64_t e = 0; e < num_edges(); ++e) {
    const Edge& old = edges_[size_t(e)];
    if (new_index[size_t(old.head)] >= 0 && new_index[size_t(old.tail)] >= 0) {
      edges.emplace_back(new_index[size_t(old.head)], new_index[size_t(old.tail)], old.relation);
      kept_edges.push_back(e);
    }
  }
  Graph g;
  g.num_nodes_ = int64_t(nodes.size());
  g.edges_ = std::move(edges);
  g.num_relations_ = num_relations_;
  g.node_attrs_ = select_rows(node_attrs_, nodes);
  g.edge_attrs_ = select_rows(edge_attrs_, kept_edges);
  g.graph_attrs_ = graph_attrs_;
  return g;
}

std::pair<std::vector<int64_t>, int64_t> Graph::connected_components() const {
  // Union-find over undirected structure.
  std::vector<int64_t> parent(static_cast<size_t>(num_nodes_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int64_t x) {
    while (parent[size_t(x)] != x) {
      parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
      x = parent[size_t(x)];
    }
    return x;
  };
  for (const Edge& e : edges_) {
    int64_t a = find(e.head), b = find(e.tail);
    if (a != b) parent[size_t(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int64_t> ids(static_cast<size_t>(num_nodes_), -1);
  int64_t count = 0;
  for (int64_t i = 0; i < num_nodes_; ++i) {
    int64_t root = find(i);
    if (ids[size_t(root)] < 0) ids[size_t(root)] = count++;
    ids[size_t(i)] = ids[size_t(root)];
  }
  return {std::move(ids), count};
}

Tensor Graph::degrees(Direction direction) const {
  Tensor out = Tensor::zeros({num_nodes_});
  auto d = out.mutable_data();
  for (const Edge& e : edges_) {
    if (direction == Direction::out || direction == Direction::both) d[size_t(e.head)] += 1.f;
    if (direction == Direction::in || direction == Direction::both) d[size_t(e.tail)] += 1.f;
  }
  return out;
}

Graph Graph::to_undirected() const {
  std::vector<Edge> edges;
  std::vector<int64_t> row_map;
  edges.reserve(edges_.size() * 2);
  for (int64_t e = 0; e < num_edges(); ++e) {
    const Edge& old = edges_[size_t(e)];
    edges.push_back(old);
    row_map.push_back(e);
    if (old.head != old.tail) {
      edges.emplace_back(old.tail, old.head, old.relation);
      row_map.push_back(e);
    }
  }
  Graph g = *this;
  g.edges_ = std::move(edges);
  g.edge_attrs_ = select_rows(edge_attrs_, row_map);
  return g;
}

bool tables_bit_equal(const AttrTable& a, const AttrTable& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !ia->second.bit_equal(ib->second)) return false;
  }
  return true;
}

bool Graph::operator==(const Graph& other) const {
  return num_nodes_ == other.num_nodes_ && edges_ == other.edges_ &&
         num_relations_ == other.num_relations_ &&
         tables_bit_equal(node_attrs_, other.node_attrs_) &&
         tables_bit_equal(edge_attrs_, other.edge_attrs_) &&
         tables_bit_equal(graph_attrs_, other.graph_attrs_);
}

AttributeRegistry AttributeRegistry::of(const Graph& g) {
  AttributeRegistry reg;
  auto suffix_of = [](const Tensor& t) {
    return std::vector<int64_t>(t.shape().begin() + 1, t.shape().end());
  };
  for (const auto& [name, t] : g.node_attrs()) reg.node[name] = Entry{suffix_of(t), 0.f};
  for (const auto& [name, t] : g.edge_attrs()) reg.edge[name] = Entry{suffix_of(t), 0.f};
  for (const auto& [name, t] : g.graph_attrs()) reg.graph[name] = Entry{t.shape(), 0.f};
  reg.num_relations = g.num_relations();
  return reg;
}

std::string AttributeRegistry::describe_mismatch(const AttributeRegistry& other) const {
  auto diff_level = [](const std::map<std::string, Entry>& a,
                       const std::map<std::string, Entry>& b,
                       const char* level) -> std::string {
    for (const auto& [name, entry] : a) {
      auto it = b.find(name);
      if (it == b.end()) return std::string(level) + " attribute \"" + name + "\" missing";
      if (!(it->second == entry))
        return std::string(level) + " attribute \"" + name + "\" shape differs";
    }
    for (const auto& [name, entry] : b) {
      if (a.find(name) == a.end())
        return std::string(level) + " attribute \"" + name + "\" unexpected";
    }
    return "";
  };
  if (num_relations != other.num_relations) return "relation vocabulary differs";
  for (const auto* msg : {"node", "edge", "graph"}) {
    std::string d = msg == std::string("node")   ? diff_level(node, other.node, "node")
                    : msg == std::string("edge") ? diff_level(edge, other.edge, "edge")
                                                 : diff_level(graph, other.graph, "graph");
    if (!d.empty()) return d;
  }
  return "";
}

Graph AttributeRegistry::ensure(const Graph& g) const {
  Graph out = g;
  for (const auto& [name, entry] : node) {
    if (!out.has_node_attr(name)) {
      std::vector<int64_t> shape{g.num_nodes()};
      shape.insert(shape.end(), entry.suffix.begin(), entry.suffix.end());
      out = out.with_node_attr(name, Tensor::full(shape, entry.fill));
    }
  }
  for (const auto& [name, entry] : edge) {
    if (!out.has_edge_attr(name)) {
      std::vector<int64_t> shape{g.num_edges()};
      shape.insert(shape.end(), entry.suffix.begin(), entry.suffix.end());
      out = out.with_edge_attr(name, Tensor::full(shape, entry.fill));
    }
  }
  for (const auto& [name, entry] : graph) {
    if (!out.has_graph_attr(name)) {
      out = out.with_graph_attr(name, Tensor::full(entry.suffix, entry.fill));
    }
  }
  return out;
}

}  // namespace graphrx
