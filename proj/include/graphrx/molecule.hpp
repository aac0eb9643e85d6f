// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "graphrx/graph.hpp"
#include "graphrx/packed_graph.hpp"

namespace graphrx {

enum class BondType : int { single = 1, double_bond = 2, triple = 3, aromatic = 4 };

/// A molecule is a Graph with chemical node/edge attributes. Bonds are
/// stored undirected-as-two-directed: directed edges 2i and 2i+1 are the
/// two directions of bond i and always agree on bond_type.
///
/// Node attributes: atomic_number, formal_charge, aromatic,
/// implicit_hydrogens, isotope (0 = unspecified). Edge attribute:
/// bond_type. Graph attribute nonstandard_valence flags molecules whose
/// atoms fall outside the standard valence model (flagged, not rejected).
class Molecule {
public:
  struct Atom {
    int atomic_number = 6;
    int formal_charge = 0;
    bool aromatic = false;
    int implicit_hydrogens = 0;
    int isotope = 0;
  };
  struct Bond {
    int64_t a = 0;
    int64_t b = 0;
    BondType type = BondType::single;
  };

  Molecule() : Molecule(std::vector<Atom>{}, std::vector<Bond>{}) {}

  /// Builds the directed-pair graph form; bond endpoints must be distinct
  /// (no chemical self-bonds) and listed at most once per pair.
  Molecule(const std::vector<Atom>& atoms, const std::vector<Bond>& bonds);

  /// Adopts an existing graph that already carries the molecule schema.
  static Molecule from_graph(Graph g);

  const Graph& graph() const { return graph_; }
  int64_t num_atoms() const { return graph_.num_nodes(); }
  int64_t num_bonds() const { return graph_.num_edges() / 2; }
  Atom atom(int64_t i) const;
  Bond bond(int64_t i) const;            // bond i = directed edges 2i, 2i+1
  BondType edge_bond_type(int64_t directed_edge) const;
  std::vector<int64_t> neighbors(int64_t atom) const;  // ascending, per bond

  bool nonstandard_valence() const;
  int64_t num_components() const;
  /// Molecular formula in Hill order, counting implicit hydrogens.
  std::string formula() const;

  bool operator==(const Molecule& other) const { return graph_ == other.graph_; }

  /// The shared attribute schema, usable to pack molecules with plain
  /// graphs that were given the same tables.
  static const AttributeRegistry& registry();

private:
  explicit Molecule(Graph g) : graph_(std::move(g)) {}
  Graph graph_;
};

struct IonReport {
  std::vector<bool> changed;
  int64_t num_changed = 0;
};

/// Neutralizes hydrogen-adjustable charges: anions with a free valence
/// slot gain |charge| implicit hydrogens, cations carrying enough implicit
/// hydrogens lose them. Atoms with no consistent neutral form (metal
/// cations, carbocations) stay charged and are reported unchanged.
std::pair<Molecule, IonReport> ion_to_molecule(const Molecule& m);

inline constexpr int64_t kAtomFeatureDim = 33;
inline constexpr int64_t kBondFeatureDim = 4;
inline constexpr int kFeatureSchemeVersion = 1;

/// Fixed 33-dim atom feature rows: element one-hot over a 16-entry
/// palette, formal charge one-hot in [-2, 2], aromatic flag, implicit-H
/// one-hot 0..4, degree one-hot 0..5. Rows align with atom indices.
Tensor featurize_atoms(const Graph& molecule_graph);
Tensor featurize_atoms(const PackedGraph& molecules);

/// One-hot bond type per directed edge row.
Tensor featurize_bonds(const Graph& molecule_graph);
Tensor featurize_bonds(const PackedGraph& molecules);

/// Iteratively removes degree <= 1 atoms until a fixpoint: the ring
/// systems plus linkers. Acyclic molecules reduce to the empty molecule.
Molecule murcko_scaffold(const Molecule& m);

}  // namespace graphrx
