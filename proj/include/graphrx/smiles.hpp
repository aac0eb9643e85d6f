// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "graphrx/molecule.hpp"

namespace graphrx {

/// Non-fatal parser events. Stereo markers (/ \ @ @@) are accepted
/// lexically and discarded; each discard is counted here.
struct SmilesWarnings {
  int discarded_stereo = 0;
};

/// Parses one SMILES string in the supported subset: organic-subset and
/// bracket atoms, aromatic lowercase forms, bonds - = # :, branches,
/// ring closures 1-9 and %nn, dot-separated fragments. Implicit
/// hydrogens follow the standard valence model; bracket H counts are
/// taken verbatim.
Molecule from_smiles(const std::string& text, SmilesWarnings* warnings = nullptr);

/// Parses each line into one molecule and packs them in input order.
/// The first failing line aborts with its 1-based line number; no
/// partial batch is returned.
PackedGraph from_smiles_batch(const std::vector<std::string>& lines,
                              SmilesWarnings* warnings = nullptr);

/// Deterministic writer: DFS from the lowest-index atom of each
/// component, neighbors by ascending index. Output re-parses to a
/// molecule isomorphic to the input; atoms whose hydrogen count the
/// reader would not re-infer are written in bracket form.
std::string to_smiles(const Molecule& m);

}  // namespace graphrx
