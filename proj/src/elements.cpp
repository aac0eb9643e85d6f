// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/elements.hpp"

#include <array>
#include <cstdlib>
#include <unordered_map>

#include "graphrx/error.hpp"

namespace graphrx {

namespace {

constexpr int kMaxElement = 118;

const std::array<std::string, kMaxElement + 1>& symbol_table() {
  static const std::array<std::string, kMaxElement + 1> table = {
      "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al",
      "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co",
      "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb",
      "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs",
      "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm",
      "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
      "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk",
      "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg",
      "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};
  return table;
}

const std::unordered_map<std::string, int>& symbol_index() {
  static const std::unordered_map<std::string, int> index = [] {
    std::unordered_map<std::string, int> m;
    const auto& table = symbol_table();
    for (int z = 1; z <= kMaxElement; ++z) m[table[size_t(z)]] = z;
    return m;
  }();
  return index;
}

}  // namespace

int element_number(const std::string& symbol) {
  auto it = symbol_index().find(symbol);
  return it == symbol_index().end() ? 0 : it->second;
}

const std::string& element_symbol(int atomic_number) {
  if (atomic_number < 1 || atomic_number > kMaxElement)
    throw IndexError("atomic number " + std::to_string(atomic_number) + " out of range");
  return symbol_table()[size_t(atomic_number)];
}

bool in_organic_subset(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 9:
    case 15: case 16: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

bool supports_aromatic(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 15: case 16:
      return true;
    default:
      return false;
  }
}

std::vector<int> allowed_valences(int z, int charge) {
  std::vector<int> base;
  switch (z) {
    case 5: base = {3}; break;                 // B
    case 6: base = {4}; break;                 // C
    case 7: base = {3}; break;                 // N
    case 8: base = {2}; break;                 // O
    case 15: base = {3, 5}; break;             // P
    case 16: base = {2, 4, 6}; break;          // S
    case 9: case 17: case 35: case 53: base = {1}; break;
    default: return {};
  }
  // Formal-charge shift: boron loses capacity with positive charge, carbon
  // with either sign, the electronegative block gains with positive charge.
  int shift;
  if (z == 5) {
    shift = -charge;
  } else if (z == 6) {
    shift = -std::abs(charge);
  } else {
    shift = charge;
  }
  std::vector<int> out;
  for (int v : base) {
    int adjusted = v + shift;
    if (adjusted >= 0) out.push_back(adjusted);
  }
  return out;
}

namespace {

// Bond-order totals the environment can take in some kekulized form,
// in preference order.
std::vector<int> candidate_totals(const ValenceEnv& e) {
  if (!e.aromatic_atom) {
    // ':' bonds on a plain atom count 1.5 each, rounded up.
    return {e.sigma_order_sum + (3 * e.aromatic_bonds + 1) / 2};
  }
  int no_pi = e.aromatic_bonds + e.sigma_order_sum;
  int with_pi = no_pi + 1;
  if (e.atomic_number == 8 || e.atomic_number == 16) return {no_pi, with_pi};
  return {with_pi, no_pi};
}

}  // namespace

int infer_implicit_hydrogens(const ValenceEnv& env) {
  auto allowed = allowed_valences(env.atomic_number, env.formal_charge);
  if (allowed.empty()) return 0;
  for (int total : candidate_totals(env)) {
    int best = -1;
    for (int v : allowed)
      if (v >= total && (best < 0 || v < best)) best = v;
    if (best >= 0) return best - total;
  }
  return -1;
}

bool valence_consistent(const ValenceEnv& env, int hydrogens) {
  auto allowed = allowed_valences(env.atomic_number, env.formal_charge);
  if (allowed.empty()) return true;
  for (int total : candidate_totals(env))
    for (int v : allowed)
      if (total + hydrogens == v) return true;
  return false;
}

}  // namespace graphrx
