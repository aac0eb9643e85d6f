// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/io/formats.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphrx/elements.hpp"
#include "graphrx/error.hpp"
#include "graphrx/smiles.hpp"

namespace graphrx::io {

Graph read_edge_list(std::istream& in, int64_t min_nodes) {
  std::vector<Edge> edges;
  int64_t max_node = min_nodes - 1;
  int64_t max_relation = -1;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    int64_t head, tail;
    if (!(fields >> head)) continue;  // blank or comment-only line
    if (!(fields >> tail))
      throw ParseError("edge list line " + std::to_string(line_no) + ": missing tail");
    int64_t relation = kNoRelation;
    fields >> relation;
    if (head < 0 || tail < 0)
      throw ParseError("edge list line " + std::to_string(line_no) + ": negative node id");
    edges.emplace_back(head, tail, relation);
    max_node = std::max({max_node, head, tail});
    max_relation = std::max(max_relation, relation);
  }
  if (max_relation >= 0) {
    for (Edge& e : edges)
      if (e.relation == kNoRelation)
        throw ParseError("edge list mixes relation and relation-free lines");
  }
  return Graph::build(max_node + 1, std::move(edges), max_relation + 1);
}

Graph read_edge_list_file(const std::string& path, int64_t min_nodes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list " + path);
  return read_edge_list(in, min_nodes);
}

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "# nodes: " << g.num_nodes() << "\n";
  for (const Edge& e : g.edges()) {
    out << e.head << '\t' << e.tail;
    if (e.relation != kNoRelation) out << '\t' << e.relation;
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r': break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        break;
      default: field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (any && (!field.empty() || !row.empty())) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

gnn::PropertyDataset load_property_csv(const std::string& path, const std::string& label_column,
                                       CsvLoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path);
  auto rows = parse_csv(in);
  if (rows.empty()) throw ParseError("dataset " + path + " has no header row");

  const auto& header = rows[0];
  auto find_column = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return int64_t(i);
    throw SchemaError("dataset " + path + " lacks required column \"" + name + "\"");
  };
  int64_t smiles_at = find_column("smiles");
  int64_t label_at = find_column(label_column);

  gnn::PropertyDataset dataset;
  CsvLoadStats local;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++local.rows;
    auto note = [&](const std::string& what) {
      if (local.first_errors.size() < 5)
        local.first_errors.push_back("row " + std::to_string(r + 1) + ": " + what);
    };
    if (int64_t(row.size()) <= std::max(smiles_at, label_at)) {
      ++local.parse_failures;
      note("too few fields");
      continue;
    }
    const std::string& label_text = row[size_t(label_at)];
    if (label_text.empty()) {
      ++local.missing_label;
      note("missing label");
      continue;
    }
    float label;
    try {
      label = std::stof(label_text);
    } catch (const std::exception&) {
      ++local.missing_label;
      note("unreadable label \"" + label_text + "\"");
      continue;
    }
    try {
      Molecule m = from_smiles(row[size_t(smiles_at)]);
      dataset.molecules.push_back(m.graph());
      dataset.labels.push_back(label);
      dataset.smiles.push_back(row[size_t(smiles_at)]);
    } catch (const ParseError& e) {
      ++local.parse_failures;
      note(e.what());
    }
  }
  if (stats) *stats = local;
  return dataset;
}

std::string to_dot(const Molecule& m, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  out << "  node [shape=circle];\n";
  for (int64_t i = 0; i < m.num_atoms(); ++i) {
    Molecule::Atom atom = m.atom(i);
    std::string label = element_symbol(atom.atomic_number);
    if (atom.formal_charge > 0)
      label += "+" + (atom.formal_charge > 1 ? std::to_string(atom.formal_charge) : "");
    if (atom.formal_charge < 0)
      label += "-" + (atom.formal_charge < -1 ? std::to_string(-atom.formal_charge) : "");
    out << "  " << i << " [label=\"" << label << "\"];\n";
  }
  for (int64_t b = 0; b < m.num_bonds(); ++b) {
    Molecule::Bond bond = m.bond(b);
    out << "  " << bond.a << " -- " << bond.b;
    switch (bond.type) {
      case BondType::single: break;
      case BondType::double_bond: out << " [label=\"=\"]"; break;
      case BondType::triple: out << " [label=\"#\"]"; break;
      case BondType::aromatic: out << " [style=dashed]"; break;
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

bool validate_metrics_line(const std::string& line, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
  if (record.is_discarded() || !record.is_object()) return fail("not a JSON object");
  if (!record.contains("event") || !record["event"].is_string())
    return fail("missing string field \"event\"");
  std::string event = record["event"];

  auto require = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys)
      if (!record.contains(key)) return fail(event + " record missing \"" + key + "\"");
    return true;
  };
  if (event == "config") return require({"task", "config"});
  if (event == "epoch") return require({"epoch", "loss"});
  if (event == "property_epoch") return require({"epoch", "train_loss", "valid_metric"});
  if (event == "eval") return require({"split", "filtered", "metrics", "triples"});
  if (event == "property_eval") return require({"subset", "metrics", "count"});
  if (event == "molecule") return require({"line", "smiles", "atoms", "bonds", "components", "formula"});
  if (event == "parse_error") return require({"line", "error"});
  if (event == "summary") return require({"parsed", "failed"});
  if (event == "query") return require({"head", "relation", "results"});
  if (event == "warnings") return true;
  return fail("unknown event \"" + event + "\"");
}

}  // namespace graphrx::io
