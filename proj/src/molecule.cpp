// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/molecule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "graphrx/elements.hpp"
#include "graphrx/error.hpp"

namespace graphrx {

namespace {

constexpr const char* kNodeAttrNames[] = {"aromatic", "atomic_number", "formal_charge",
                                          "implicit_hydrogens", "isotope"};

ValenceEnv environment_of(const Molecule::Atom& atom, int aromatic_bonds, int sigma_sum) {
  return ValenceEnv{atom.atomic_number, atom.formal_charge, atom.aromatic, aromatic_bonds,
                    sigma_sum};
}

// Incident aromatic-bond count and non-aromatic order sum per atom.
void bond_sums(const std::vector<Molecule::Bond>& bonds, size_t num_atoms,
               std::vector<int>& aromatic_count, std::vector<int>& sigma_sum) {
  aromatic_count.assign(num_atoms, 0);
  sigma_sum.assign(num_atoms, 0);
  for (const auto& bond : bonds) {
    for (int64_t end : {bond.a, bond.b}) {
      if (bond.type == BondType::aromatic)
        aromatic_count[size_t(end)]++;
      else
        sigma_sum[size_t(end)] += int(bond.type);
    }
  }
}

}  // namespace

Molecule::Molecule(const std::vector<Atom>& atoms, const std::vector<Bond>& bonds)
    : graph_() {
  int64_t n = int64_t(atoms.size());
  std::set<std::pair<int64_t, int64_t>> seen;
  std::vector<Edge> edges;
  std::vector<float> bond_type;
  edges.reserve(bonds.size() * 2);
  for (const Bond& bond : bonds) {
    if (bond.a < 0 || bond.a >= n || bond.b < 0 || bond.b >= n)
      throw IndexError("bond endpoint out of range");
    if (bond.a == bond.b) throw ContractError("molecule bonds cannot be self-loops");
    if (!seen.insert(std::minmax(bond.a, bond.b)).second)
      throw ContractError("duplicate bond between atoms " + std::to_string(bond.a) + " and " +
                          std::to_string(bond.b));
    edges.emplace_back(bond.a, bond.b);
    edges.emplace_back(bond.b, bond.a);
    bond_type.push_back(float(int(bond.type)));
    bond_type.push_back(float(int(bond.type)));
  }

  auto column = [&](auto getter) {
    std::vector<float> data(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) data[i] = float(getter(atoms[i]));
    return Tensor::from_data({n}, std::move(data));
  };
  AttrTable node_attrs;
  node_attrs.emplace("atomic_number", column([](const Atom& a) { return a.atomic_number; }));
  node_attrs.emplace("formal_charge", column([](const Atom& a) { return a.formal_charge; }));
  node_attrs.emplace("aromatic", column([](const Atom& a) { return a.aromatic ? 1 : 0; }));
  node_attrs.emplace("implicit_hydrogens",
                     column([](const Atom& a) { return a.implicit_hydrogens; }));
  node_attrs.emplace("isotope", column([](const Atom& a) { return a.isotope; }));

  AttrTable edge_attrs;
  int64_t num_directed = int64_t(bond_type.size());
  edge_attrs.emplace("bond_type", Tensor::from_data({num_directed}, std::move(bond_type)));

  std::vector<int> aromatic_count, sigma_sum;
  bond_sums(bonds, atoms.size(), aromatic_count, sigma_sum);
  bool standard = true;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (!valence_consistent(environment_of(atoms[i], aromatic_count[i], sigma_sum[i]),
                            atoms[i].implicit_hydrogens)) {
      standard = false;
      break;
    }
  }
  AttrTable graph_attrs;
  graph_attrs.emplace("nonstandard_valence", Tensor::scalar(standard ? 0.f : 1.f));

  graph_ = Graph::build(n, std::move(edges), 0, std::move(node_attrs), std::move(edge_attrs),
                        std::move(graph_attrs));
}

Molecule Molecule::from_graph(Graph g) {
  for (const char* name : kNodeAttrNames) {
    if (!g.has_node_attr(name))
      throw SchemaError(std::string("graph lacks molecule attribute \"") + name + "\"");
  }
  if (!g.has_edge_attr("bond_type")) throw SchemaError("graph lacks edge attribute \"bond_type\"");
  if (!g.has_graph_attr("nonstandard_valence"))
    throw SchemaError("graph lacks attribute \"nonstandard_valence\"");
  if (g.num_edges() % 2 != 0)
    throw SchemaError("molecule graphs store bonds as directed pairs");
  const auto& edges = g.edges();
  const Tensor& types = g.edge_attr("bond_type");
  for (int64_t b = 0; b < g.num_edges() / 2; ++b) {
    const Edge& fwd = edges[size_t(2 * b)];
    const Edge& rev = edges[size_t(2 * b + 1)];
    if (fwd.head != rev.tail || fwd.tail != rev.head ||
        types.at(2 * b) != types.at(2 * b + 1))
      throw SchemaError("directed edge pair " + std::to_string(b) + " is inconsistent");
  }
  return Molecule(std::move(g));
}

Molecule::Atom Molecule::atom(int64_t i) const {
  if (i < 0 || i >= num_atoms()) throw IndexError("atom index " + std::to_string(i) + " out of range");
  Atom a;
  a.atomic_number = int(graph_.node_attr("atomic_number").at(i));
  a.formal_charge = int(graph_.node_attr("formal_charge").at(i));
  a.aromatic = graph_.node_attr("aromatic").at(i) != 0.f;
  a.implicit_hydrogens = int(graph_.node_attr("implicit_hydrogens").at(i));
  a.isotope = int(graph_.node_attr("isotope").at(i));
  return a;
}

Molecule::Bond Molecule::bond(int64_t i) const {
  if (i < 0 || i >= num_bonds()) throw IndexError("bond index " + std::to_string(i) + " out of range");
  const Edge& e = graph_.edges()[size_t(2 * i)];
  return Bond{e.head, e.tail, BondType(int(graph_.edge_attr("bond_type").at(2 * i)))};
}

BondType Molecule::edge_bond_type(int64_t directed_edge) const {
  if (directed_edge < 0 || directed_edge >= graph_.num_edges())
    throw IndexError("edge index out of range");
  return BondType(int(graph_.edge_attr("bond_type").at(directed_edge)));
}

std::vector<int64_t> Molecule::neighbors(int64_t atom) const {
  std::vector<int64_t> out;
  for (const Edge& e : graph_.edges())
    if (e.head == atom) out.push_back(e.tail);
  std::sort(out.begin(), out.end());
  return out;
}

bool Molecule::nonstandard_valence() const {
  return graph_.graph_attr("nonstandard_valence").item() != 0.f;
}

int64_t Molecule::num_components() const { return graph_.connected_components().second; }

std::string Molecule::formula() const {
  std::map<std::string, int64_t> counts;
  int64_t hydrogens = 0;
  for (int64_t i = 0; i < num_atoms(); ++i) {
    Atom a = atom(i);
    counts[element_symbol(a.atomic_number)]++;
    hydrogens += a.implicit_hydrogens;
    if (a.atomic_number == 1) hydrogens++;  // explicit [H] nodes count as H
  }
  counts.erase("H");
  if (hydrogens > 0) counts["H"] = hydrogens;

  std::ostringstream out;
  auto append = [&](const std::string& symbol) {
    auto it = counts.find(symbol);
    if (it == counts.end()) return;
    out << symbol;
    if (it->second > 1) out << it->second;
    counts.erase(it);
  };
  if (counts.count("C")) {
    append("C");
    append("H");
  }
  for (const auto& [symbol, count] : std::map<std::string, int64_t>(counts)) append(symbol);
  return out.str();
}

const AttributeRegistry& Molecule::registry() {
  static const AttributeRegistry reg = AttributeRegistry::of(Molecule().graph());
  return reg;
}

std::pair<Molecule, IonReport> ion_to_molecule(const Molecule& m) {
  int64_t n = m.num_atoms();
  IonReport report;
  report.changed.assign(size_t(n), false);

  std::vector<Molecule::Bond> bonds;
  for (int64_t b = 0; b < m.num_bonds(); ++b) bonds.push_back(m.bond(b));
  std::vector<int> aromatic_count, sigma_sum;
  bond_sums(bonds, size_t(n), aromatic_count, sigma_sum);

  std::vector<float> charge(static_cast<size_t>(n)), hydrogens(static_cast<size_t>(n));
  std::vector<Molecule::Atom> atoms(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    Molecule::Atom a = m.atom(i);
    atoms[size_t(i)] = a;
    if (a.formal_charge != 0 && !allowed_valences(a.atomic_number, 0).empty()) {
      int h = a.implicit_hydrogens;
      int delta = -a.formal_charge;  // hydrogens to add (anion) or remove (cation)
      int candidate_h = h + delta;
      if (candidate_h >= 0) {
        ValenceEnv neutral{a.atomic_number, 0, a.aromatic, aromatic_count[size_t(i)],
                           sigma_sum[size_t(i)]};
        if (valence_consistent(neutral, candidate_h)) {
          atoms[size_t(i)].formal_charge = 0;
          atoms[size_t(i)].implicit_hydrogens = candidate_h;
          report.changed[size_t(i)] = true;
          report.num_changed++;
        }
      }
    }
    charge[size_t(i)] = float(atoms[size_t(i)].formal_charge);
    hydrogens[size_t(i)] = float(atoms[size_t(i)].implicit_hydrogens);
  }

  bool standard = true;
  for (int64_t i = 0; i < n; ++i) {
    if (!valence_consistent(
            environment_of(atoms[size_t(i)], aromatic_count[size_t(i)], sigma_sum[size_t(i)]),
            atoms[size_t(i)].implicit_hydrogens)) {
      standard = false;
      break;
    }
  }

  Graph g = m.graph()
                .with_node_attr("formal_charge", Tensor::from_data({n}, std::move(charge)))
                .with_node_attr("implicit_hydrogens", Tensor::from_data({n}, std::move(hydrogens)))
                .with_graph_attr("nonstandard_valence", Tensor::scalar(standard ? 0.f : 1.f));
  return {Molecule::from_graph(std::move(g)), std::move(report)};
}

namespace {

int palette_slot(int z) {
  switch (z) {
    case 5: return 0;    // B
    case 6: return 1;    // C
    case 7: return 2;    // N
    case 8: return 3;    // O
    case 9: return 4;    // F
    case 14: return 5;   // Si
    case 15: return 6;   // P
    case 16: return 7;   // S
    case 17: return 8;   // Cl
    case 35: return 9;   // Br
    case 53: return 10;  // I
    case 11: return 11;  // Na
    case 19: return 12;  // K
    case 3: return 13;   // Li
    case 20: return 14;  // Ca
    default: return 15;  // other
  }
}

Tensor featurize_atom_rows(const AttrTable& node_attrs, const std::vector<Edge>& edges,
                           int64_t num_nodes) {
  const Tensor& z = node_attrs.at("atomic_number");
  const Tensor& charge = node_attrs.at("formal_charge");
  const Tensor& aromatic = node_attrs.at("aromatic");
  const Tensor& hydrogens = node_attrs.at("implicit_hydrogens");
  std::vector<int> degree(size_t(num_nodes), 0);
  for (const Edge& e : edges) degree[size_t(e.head)]++;

  Tensor out = Tensor::zeros({num_nodes, kAtomFeatureDim});
  auto rows = out.mutable_data();
  for (int64_t i = 0; i < num_nodes; ++i) {
    float* row = rows.data() + i * kAtomFeatureDim;
    row[palette_slot(int(z.at(i)))] = 1.f;
    int q = std::clamp(int(charge.at(i)), -2, 2);
    row[16 + q + 2] = 1.f;
    row[21] = aromatic.at(i) != 0.f ? 1.f : 0.f;
    int h = std::clamp(int(hydrogens.at(i)), 0, 4);
    row[22 + h] = 1.f;
    int d = std::clamp(degree[size_t(i)], 0, 5);
    row[27 + d] = 1.f;
  }
  return out;
}

Tensor featurize_bond_rows(const Tensor& bond_type) {
  int64_t m = bond_type.numel();
  Tensor out = Tensor::zeros({m, kBondFeatureDim});
  auto rows = out.mutable_data();
  for (int64_t i = 0; i < m; ++i) {
    int code = int(bond_type.at(i));
    if (code < 1 || code > 4) throw DomainError("bond type code out of range");
    rows[size_t(i * kBondFeatureDim + code - 1)] = 1.f;
  }
  return out;
}

}  // namespace

Tensor featurize_atoms(const Graph& g) {
  return featurize_atom_rows(g.node_attrs(), g.edges(), g.num_nodes());
}

Tensor featurize_atoms(const PackedGraph& pg) {
  return featurize_atom_rows(pg.node_attrs(), pg.edges(), pg.total_nodes());
}

Tensor featurize_bonds(const Graph& g) { return featurize_bond_rows(g.edge_attr("bond_type")); }

Tensor featurize_bonds(const PackedGraph& pg) {
  return featurize_bond_rows(pg.edge_attr("bond_type"));
}

Molecule murcko_scaffold(const Molecule& m) {
  Graph g = m.graph();
  for (;;) {
    Tensor degree = g.degrees(Direction::out);
    std::vector<bool> keep(static_cast<size_t>(g.num_nodes()));
    bool changed = false;
    for (int64_t i = 0; i < g.num_nodes(); ++i) {
      keep[size_t(i)] = degree.at(i) >= 2.f;
      changed = changed || !keep[size_t(i)];
    }
    if (!changed) break;
    g = g.node_mask(keep);
  }
  return Molecule::from_graph(std::move(g));
}

}  // namespace graphrx
