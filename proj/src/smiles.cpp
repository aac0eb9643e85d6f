// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "graphrx/elements.hpp"
#include "graphrx/error.hpp"

namespace graphrx {

namespace {

struct AtomDraft {
  Molecule::Atom atom;
  bool bracket = false;
  long pos = 0;
};

struct RingSlot {
  int64_t atom;
  std::optional<BondType> bond;
  long pos;
};

class Parser {
public:
  Parser(const std::string& text, SmilesWarnings* warnings)
      : text_(text), warnings_(warnings) {}

  Molecule run() {
    while (pos_ < text_.size()) step();
    finish();

    std::vector<Molecule::Atom> atoms;
    atoms.reserve(drafts_.size());
    resolve_hydrogens();
    for (const AtomDraft& d : drafts_) atoms.push_back(d.atom);
    return Molecule(atoms, bonds_);
  }

private:
  [[noreturn]] void fail(const std::string& message, long at) const {
    throw ParseError(message, at);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }

  int read_digits(int max_digits) {
    int value = 0, seen = 0;
    while (seen < max_digits && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (take() - '0');
      ++seen;
    }
    return seen > 0 ? value : -1;
  }

  void step() {
    long at = long(pos_);
    char c = take();
    switch (c) {
      case '-': set_pending(BondType::single, at); return;
      case '=': set_pending(BondType::double_bond, at); return;
      case '#': set_pending(BondType::triple, at); return;
      case ':': set_pending(BondType::aromatic, at); return;
      case '/':
      case '\\':
        // Stereo bond markers: accepted, recorded, treated as single.
        if (warnings_) warnings_->discarded_stereo++;
        set_pending(BondType::single, at);
        return;
      case '(':
        if (prev_ < 0) fail("branch opens before any atom", at);
        if (pending_) fail("bond symbol before '('", at);
        branch_stack_.push_back(prev_);
        return;
      case ')':
        if (branch_stack_.empty()) fail("unmatched ')'", at);
        if (pending_) fail("bond symbol before ')'", at);
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        return;
      case '.':
        if (pending_) fail("bond symbol before '.'", at);
        prev_ = -1;
        dangling_dot_ = true;
        return;
      case '%': {
        int number = read_digits(2);
        if (number < 10) fail("'%' ring bond needs two digits", at);
        ring_bond(number, at);
        return;
      }
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ring_bond(c - '0', at);
      return;
    }
    if (c == '[') {
      bracket_atom(at);
      return;
    }
    organic_atom(c, at);
  }

  void organic_atom(char c, long at) {
    AtomDraft draft;
    draft.pos = at;
    std::string symbol(1, c);
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string upper(1, char(std::toupper(c)));
      int z = element_number(upper);
      if (z == 0 || !supports_aromatic(z))
        fail(std::string("unexpected character '") + c + "'", at);
      draft.atom.atomic_number = z;
      draft.atom.aromatic = true;
    } else {
      // Two-letter organic-subset symbols: Cl, Br.
      if ((c == 'C' && peek() == 'l') || (c == 'B' && peek() == 'r')) symbol += take();
      int z = element_number(symbol);
      if (z == 0 || !in_organic_subset(z))
        fail("element \"" + symbol + "\" needs bracket notation", at);
      draft.atom.atomic_number = z;
    }
    add_atom(draft);
  }

  void bracket_atom(long at) {
    AtomDraft draft;
    draft.bracket = true;
    draft.pos = at;

    int isotope = read_digits(3);
    if (isotope >= 0) draft.atom.isotope = isotope;

    char c = peek();
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string upper(1, char(std::toupper(take())));
      int z = element_number(upper);
      if (z == 0 || !supports_aromatic(z))
        fail(std::string("unknown aromatic symbol '") + c + "' in bracket", long(pos_) - 1);
      draft.atom.atomic_number = z;
      draft.atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string symbol(1, take());
      if (std::islower(static_cast<unsigned char>(peek()))) {
        // Greedy two-letter match; single letter may still be the element.
        std::string two = symbol + peek();
        if (element_number(two) != 0) {
          symbol = two;
          take();
        }
      }
      int z = element_number(symbol);
      if (z == 0) fail("unknown element \"" + symbol + "\"", at);
      draft.atom.atomic_number = z;
    } else {
      fail("expected element symbol in bracket", long(pos_));
    }

    while (peek() == '@') {
      take();
      if (peek() == '@') take();
      if (warnings_) warnings_->discarded_stereo++;
    }

    int hydrogens = 0;
    if (peek() == 'H') {
      take();
      int count = read_digits(2);
      hydrogens = count >= 0 ? count : 1;
    }
    draft.atom.implicit_hydrogens = hydrogens;

    if (peek() == '+' || peek() == '-') {
      char sign = take();
      int magnitude = read_digits(2);
      if (magnitude < 0) {
        magnitude = 1;
        while (peek() == sign) {
          take();
          ++magnitude;
        }
      }
      draft.atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }

    if (peek() != ']') fail("expected ']'", long(pos_));
    take();
    add_atom(draft);
  }

  void add_atom(const AtomDraft& draft) {
    int64_t index = int64_t(drafts_.size());
    drafts_.push_back(draft);
    if (prev_ >= 0) add_bond(prev_, index, take_pending(index), draft.pos);
    pending_.reset();
    prev_ = index;
    dangling_dot_ = false;
  }

  void ring_bond(int number, long at) {
    if (prev_ < 0) fail("ring bond digit before any atom", at);
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_[number] = RingSlot{prev_, pending_, at};
      pending_.reset();
      return;
    }
    RingSlot slot = it->second;
    open_rings_.erase(it);
    if (slot.atom == prev_) fail("ring bond closes on its own atom", at);
    std::optional<BondType> type;
    if (slot.bond && pending_ && *slot.bond != *pending_)
      fail("conflicting bond symbols on ring closure", at);
    type = slot.bond ? slot.bond : pending_;
    pending_.reset();
    add_bond(slot.atom, prev_, type ? *type : default_bond(slot.atom, prev_), at);
  }

  BondType default_bond(int64_t a, int64_t b) const {
    return drafts_[size_t(a)].atom.aromatic && drafts_[size_t(b)].atom.aromatic
               ? BondType::aromatic
               : BondType::single;
  }

  BondType take_pending(int64_t next) {
    return pending_ ? *pending_ : default_bond(prev_, next);
  }

  void set_pending(BondType type, long at) {
    if (prev_ < 0) fail("bond symbol before any atom", at);
    if (pending_) fail("two bond symbols in a row", at);
    pending_ = type;
  }

  void add_bond(int64_t a, int64_t b, BondType type, long at) {
    auto key = std::minmax(a, b);
    if (!bonded_.insert(key).second) fail("duplicate bond between atoms", at);
    bonds_.push_back({a, b, type});
  }

  void finish() {
    if (pending_) fail("dangling bond symbol", long(text_.size()));
    if (dangling_dot_) fail("dangling '.'", long(text_.size()));
    if (!branch_stack_.empty()) fail("unmatched '('", long(text_.size()));
    if (!open_rings_.empty()) {
      const auto& [number, slot] = *open_rings_.begin();
      fail("unclosed ring bond " + std::to_string(number), slot.pos);
    }
  }

  void resolve_hydrogens() {
    std::vector<int> aromatic_count(drafts_.size(), 0);
    std::vector<int> sigma_sum(drafts_.size(), 0);
    for (const auto& bond : bonds_) {
      int order = int(bond.type);
      for (int64_t end : {bond.a, bond.b}) {
        if (bond.type == BondType::aromatic)
          aromatic_count[size_t(end)]++;
        else
          sigma_sum[size_t(end)] += order;
      }
    }
    for (size_t i = 0; i < drafts_.size(); ++i) {
      AtomDraft& d = drafts_[i];
      if (d.atom.aromatic && aromatic_count[i] < 2)
        fail("aromatic atom outside a ring", d.pos);
      if (d.bracket) continue;  // written hydrogen count is verbatim
      ValenceEnv env{d.atom.atomic_number, d.atom.formal_charge, d.atom.aromatic,
                     aromatic_count[i], sigma_sum[i]};
      int h = infer_implicit_hydrogens(env);
      if (h < 0) fail("valence impossible even with zero implicit hydrogens", d.pos);
      d.atom.implicit_hydrogens = h;
    }
  }

  const std::string& text_;
  SmilesWarnings* warnings_;
  size_t pos_ = 0;
  int64_t prev_ = -1;
  bool dangling_dot_ = false;
  std::optional<BondType> pending_;
  std::vector<int64_t> branch_stack_;
  std::map<int, RingSlot> open_rings_;
  std::vector<AtomDraft> drafts_;
  std::vector<Molecule::Bond> bonds_;
  std::set<std::pair<int64_t, int64_t>> bonded_;
};

}  // namespace

Molecule from_smiles(const std::string& text, SmilesWarnings* warnings) {
  return Parser(text, warnings).run();
}

PackedGraph from_smiles_batch(const std::vector<std::string>& lines, SmilesWarnings* warnings) {
  std::vector<Graph> graphs;
  graphs.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      graphs.push_back(from_smiles(lines[i], warnings).graph());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return PackedGraph::pack(graphs);
}

namespace {

// Writer state over the molecule's undirected bond multiset.
class Writer {
public:
  explicit Writer(const Molecule& m) : mol_(m) {
    int64_t n = m.num_atoms();
    adjacency_.resize(size_t(n));
    for (int64_t b = 0; b < m.num_bonds(); ++b) {
      Molecule::Bond bond = m.bond(b);
      adjacency_[size_t(bond.a)].push_back({bond.b, b, bond.type});
      adjacency_[size_t(bond.b)].push_back({bond.a, b, bond.type});
    }
    for (auto& list : adjacency_)
      std::sort(list.begin(), list.end(),
                [](const Link& x, const Link& y) { return x.neighbor < y.neighbor; });
    aromatic_count_.assign(size_t(n), 0);
    sigma_sum_.assign(size_t(n), 0);
    for (int64_t b = 0; b < m.num_bonds(); ++b) {
      Molecule::Bond bond = m.bond(b);
      for (int64_t end : {bond.a, bond.b}) {
        if (bond.type == BondType::aromatic)
          aromatic_count_[size_t(end)]++;
        else
          sigma_sum_[size_t(end)] += int(bond.type);
      }
    }
  }

  std::string run() {
    int64_t n = mol_.num_atoms();
    visited_.assign(size_t(n), false);
    bond_used_.assign(size_t(mol_.num_bonds()), false);
    std::string out;
    bool first = true;
    for (int64_t start = 0; start < n; ++start) {
      if (visited_[size_t(start)]) continue;
      mark_component(start);
      if (!first) out += '.';
      first = false;
      emit(start, out);
    }
    return out;
  }

private:
  struct Link {
    int64_t neighbor;
    int64_t bond;
    BondType type;
  };

  // Pre-walk marking visited and classifying tree vs ring bonds, in the
  // exact order the emitter will take.
  void mark_component(int64_t start) {
    struct Frame {
      int64_t atom;
      size_t next = 0;
    };
    visited_[size_t(start)] = true;
    std::vector<Frame> stack{{start}};
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const auto& links = adjacency_[size_t(frame.atom)];
      if (frame.next >= links.size()) {
        stack.pop_back();
        continue;
      }
      const Link& link = links[frame.next++];
      if (bond_used_[size_t(link.bond)]) continue;
      if (visited_[size_t(link.neighbor)]) {
        ring_bonds_.insert(link.bond);
        bond_used_[size_t(link.bond)] = true;
        continue;
      }
      bond_used_[size_t(link.bond)] = true;
      tree_bonds_.insert(link.bond);
      visited_[size_t(link.neighbor)] = true;
      stack.push_back(Frame{link.neighbor});
    }
  }

  void emit(int64_t root, std::string& out) {
    struct Todo {
      int64_t atom;  // -1 marks a pending ')'
      std::string prefix;
    };
    // Depth-first over the tree established by mark_component; an explicit
    // stack keeps long chains safe from recursion limits.
    std::vector<Todo> stack{{root, ""}};
    while (!stack.empty()) {
      Todo todo = std::move(stack.back());
      stack.pop_back();
      if (todo.atom < 0) {
        out += ')';
        continue;
      }
      out += todo.prefix;
      out += atom_text(todo.atom);
      emit_ring_digits(todo.atom, out);

      std::vector<const Link*> children;
      for (const Link& link : adjacency_[size_t(todo.atom)]) {
        if (!tree_bonds_.count(link.bond) || claimed_.count(link.bond)) continue;
        claimed_.insert(link.bond);
        children.push_back(&link);
      }
      // Pushed in reverse so the first child pops first; every child but
      // the last is parenthesized.
      for (size_t i = children.size(); i-- > 0;) {
        const Link& link = *children[i];
        std::string bond = bond_symbol(link.type, todo.atom, link.neighbor);
        if (i + 1 < children.size()) {
          stack.push_back({-1, ""});
          stack.push_back({link.neighbor, "(" + bond});
        } else {
          stack.push_back({link.neighbor, bond});
        }
      }
    }
  }

  void emit_ring_digits(int64_t atom, std::string& out) {
    // Close pending digits first (partner already written), then open new
    // ones ascending by partner index.
    std::vector<std::pair<int, int64_t>> to_close;  // digit, bond
    std::vector<const Link*> to_open;
    for (const Link& link : adjacency_[size_t(atom)]) {
      if (!ring_bonds_.count(link.bond)) continue;
      auto open = open_digit_.find(link.bond);
      if (open != open_digit_.end() && open_at_[link.bond] != atom) {
        to_close.emplace_back(open->second, link.bond);
      } else if (open == open_digit_.end()) {
        to_open.push_back(&link);
      }
    }
    std::sort(to_close.begin(), to_close.end());
    for (auto [digit, bond] : to_close) {
      out += digit_text(digit);
      free_digits_.insert(digit);
      open_digit_.erase(bond);
    }
    for (const Link* link : to_open) {
      int digit = allocate_digit();
      open_digit_[link->bond] = digit;
      open_at_[link->bond] = atom;
      out += bond_symbol(link->type, atom, link->neighbor);
      out += digit_text(digit);
    }
  }

  int allocate_digit() {
    if (!free_digits_.empty()) {
      int digit = *free_digits_.begin();
      free_digits_.erase(free_digits_.begin());
      return digit;
    }
    if (next_digit_ > 99) throw ContractError("ring digit overflow");
    return next_digit_++;
  }

  static std::string digit_text(int digit) {
    if (digit < 10) return std::string(1, char('0' + digit));
    return "%" + std::to_string(digit);
  }

  std::string bond_symbol(BondType type, int64_t a, int64_t b) const {
    bool both_aromatic =
        mol_.atom(a).aromatic && mol_.atom(b).aromatic;
    switch (type) {
      case BondType::single: return both_aromatic ? "-" : "";
      case BondType::aromatic: return both_aromatic ? "" : ":";
      case BondType::double_bond: return "=";
      case BondType::triple: return "#";
    }
    return "";
  }

  std::string atom_text(int64_t i) const {
    Molecule::Atom atom = mol_.atom(i);
    std::string symbol = element_symbol(atom.atomic_number);
    if (atom.aromatic)
      for (char& c : symbol) c = char(std::tolower(c));

    ValenceEnv env{atom.atomic_number, atom.formal_charge, atom.aromatic,
                   aromatic_count_[size_t(i)], sigma_sum_[size_t(i)]};
    bool plain = in_organic_subset(atom.atomic_number) && atom.formal_charge == 0 &&
                 atom.isotope == 0 &&
                 infer_implicit_hydrogens(env) == atom.implicit_hydrogens;
    if (plain) return symbol;

    std::string out = "[";
    if (atom.isotope > 0) out += std::to_string(atom.isotope);
    out += symbol;
    if (atom.implicit_hydrogens == 1) out += "H";
    if (atom.implicit_hydrogens > 1) out += "H" + std::to_string(atom.implicit_hydrogens);
    if (atom.formal_charge != 0) {
      out += atom.formal_charge > 0 ? '+' : '-';
      int magnitude = std::abs(atom.formal_charge);
      if (magnitude > 1) out += std::to_string(magnitude);
    }
    out += ']';
    return out;
  }

  const Molecule& mol_;
  std::vector<std::vector<Link>> adjacency_;
  std::vector<int> aromatic_count_;
  std::vector<int> sigma_sum_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::set<int64_t> ring_bonds_;
  std::set<int64_t> tree_bonds_;
  std::set<int64_t> claimed_;
  std::map<int64_t, int> open_digit_;
  std::map<int64_t, int64_t> open_at_;
  std::set<int> free_digits_;
  int next_digit_ = 1;
};

}  // namespace

std::string to_smiles(const Molecule& m) { return Writer(m).run(); }

}  // namespace graphrx
