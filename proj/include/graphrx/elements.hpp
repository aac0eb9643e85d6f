// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace graphrx {

/// Atomic number for an element symbol ("C", "Cl", ...); 0 if unknown.
int element_number(const std::string& symbol);

/// Symbol for an atomic number; throws IndexError when out of range.
const std::string& element_symbol(int atomic_number);

/// Organic-subset elements may be written without brackets: B C N O P S
/// F Cl Br I.
bool in_organic_subset(int atomic_number);

/// True for elements that may be written as aromatic atoms: b c n o p s.
bool supports_aromatic(int atomic_number);

/// Allowed total valences under the standard model (B 3, C 4, N 3, O 2,
/// P 3/5, S 2/4/6, halogens 1), shifted by formal charge. Empty when the
/// element has no standard model (metals etc.).
std::vector<int> allowed_valences(int atomic_number, int formal_charge);

/// An atom's bonding environment for hydrogen inference and valence
/// checks. Aromatic bonds on an aromatic atom count one sigma bond each
/// plus one ring double bond (two ring bonds total 3); aromatic oxygen
/// and sulfur donate a lone pair instead and take no ring double bond.
struct ValenceEnv {
  int atomic_number = 6;
  int formal_charge = 0;
  bool aromatic_atom = false;
  int aromatic_bonds = 0;
  int sigma_order_sum = 0;  // integer orders of non-aromatic bonds
};

/// Hydrogens the smallest allowed valence implies, or -1 when no allowed
/// valence can absorb the bonds. Unmodeled elements get 0.
int infer_implicit_hydrogens(const ValenceEnv& env);

/// Whether bonds + hydrogens hit an allowed valence exactly. Unmodeled
/// elements always pass.
bool valence_consistent(const ValenceEnv& env, int hydrogens);

}  // namespace graphrx
