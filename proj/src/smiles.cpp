#include "enzybench/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "enzybench/chem/canonical.hpp"

namespace enzybench::chem {

namespace {

const std::set<std::string> &element_table() {
  static const std::set<std::string> table = {
      "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
      "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
      "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
      "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
      "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
      "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
      "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
      "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
      "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
      "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};
  return table;
}

// Elements that may appear lowercase (aromatic) inside brackets.
const std::set<std::string> &aromatic_bracket_elements() {
  static const std::set<std::string> table = {"b", "c", "n",  "o",
                                              "p", "s", "se", "as"};
  return table;
}

struct PendingBond {
  BondOrder order = BondOrder::Single;
  std::optional<BondGeometry> geometry;
  bool explicit_symbol = false;
};

struct RingOpening {
  int atom = -1;
  std::optional<PendingBond> bond;
  std::size_t position = 0;
};

std::string upcase_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(s[0]));
  return s;
}

}  // namespace

bool organic_subset_element(const std::string &element) {
  static const std::set<std::string> organic = {"B", "C",  "N",  "O", "P",
                                                "S", "F", "Cl", "Br", "I"};
  return organic.count(element) > 0;
}

bool known_element(const std::string &element) {
  return element_table().count(element) > 0;
}

std::optional<int> implied_hydrogens(const std::string &element,
                                     int order_sum) {
  static const std::map<std::string, std::vector<int>> valences = {
      {"B", {3}},  {"C", {4}},  {"N", {3, 5}}, {"O", {2}},  {"P", {3, 5}},
      {"S", {2, 4, 6}}, {"F", {1}}, {"Cl", {1}}, {"Br", {1}}, {"I", {1}}};
  auto it = valences.find(element);
  if (it == valences.end()) return std::nullopt;
  for (int v : it->second) {
    if (order_sum <= v) return v - order_sum;
  }
  return std::nullopt;
}

int Molecule::degree(int atom) const {
  int d = 0;
  for (const Bond &b : bonds) {
    if (b.a == atom || b.b == atom) ++d;
  }
  return d;
}

int Molecule::bond_order_sum(int atom) const {
  int sum = 0;
  for (const Bond &b : bonds) {
    if (b.a != atom && b.b != atom) continue;
    switch (b.order) {
      case BondOrder::Single: sum += 1; break;
      case BondOrder::Double: sum += 2; break;
      case BondOrder::Triple: sum += 3; break;
      case BondOrder::Aromatic: sum += 1; break;
    }
  }
  if (atoms[atom].aromatic) sum += 1;
  return sum;
}

std::vector<std::vector<int>> Molecule::components() const {
  std::vector<int> comp(atoms.size(), -1);
  std::vector<std::vector<int>> adjacency(atoms.size());
  for (const Bond &b : bonds) {
    adjacency[b.a].push_back(b.b);
    adjacency[b.b].push_back(b.a);
  }
  std::vector<std::vector<int>> out;
  for (std::size_t start = 0; start < atoms.size(); ++start) {
    if (comp[start] != -1) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{static_cast<int>(start)};
    comp[start] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[id].push_back(u);
      for (int v : adjacency[u]) {
        if (comp[v] == -1) {
          comp[v] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

const Bond *Molecule::find_bond(int a, int b) const {
  for (const Bond &bond : bonds) {
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
      return &bond;
    }
  }
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run() {
    if (text_.empty()) throw ParseError(0, "empty SMILES");
    while (pos_ < text_.size()) {
      step();
    }
    finish();
    return std::move(mol_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  std::vector<std::size_t> atom_pos_;
  int prev_atom_ = -1;
  std::optional<PendingBond> pending_;
  std::size_t pending_pos_ = 0;
  std::vector<int> branch_stack_;
  std::map<int, RingOpening> open_rings_;

  char peek() const { return text_[pos_]; }
  bool eof() const { return pos_ >= text_.size(); }

  void step() {
    char c = peek();
    if (c == '(') {
      if (prev_atom_ < 0) throw ParseError(pos_, "branch with no atom");
      if (pending_) throw ParseError(pos_, "bond before branch open");
      branch_stack_.push_back(prev_atom_);
      ++pos_;
    } else if (c == ')') {
      if (pending_) throw ParseError(pending_pos_, "dangling bond");
      if (branch_stack_.empty()) throw ParseError(pos_, "unmatched ')'");
      prev_atom_ = branch_stack_.back();
      branch_stack_.pop_back();
      ++pos_;
    } else if (c == '.') {
      if (pending_) throw ParseError(pending_pos_, "bond before dot");
      prev_atom_ = -1;
      ++pos_;
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' ||
               c == '\\') {
      if (pending_) throw ParseError(pos_, "consecutive bond symbols");
      pending_ = bond_from_symbol(c);
      pending_pos_ = pos_;
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      ring_closure();
    } else if (c == '[') {
      bracket_atom();
    } else {
      organic_atom();
    }
  }

  static PendingBond bond_from_symbol(char c) {
    PendingBond b;
    b.explicit_symbol = true;
    switch (c) {
      case '-': b.order = BondOrder::Single; break;
      case '=': b.order = BondOrder::Double; break;
      case '#': b.order = BondOrder::Triple; break;
      case ':': b.order = BondOrder::Aromatic; break;
      case '/':
        b.order = BondOrder::Single;
        b.geometry = BondGeometry::Up;
        break;
      case '\\':
        b.order = BondOrder::Single;
        b.geometry = BondGeometry::Down;
        break;
    }
    return b;
  }

  void add_atom(Atom atom, std::size_t at) {
    int index = static_cast<int>(mol_.atoms.size());
    mol_.atoms.push_back(std::move(atom));
    atom_pos_.push_back(at);
    if (prev_atom_ >= 0) {
      connect(prev_atom_, index, pending_, at);
    } else if (pending_) {
      throw ParseError(pending_pos_, "bond with no preceding atom");
    }
    pending_.reset();
    prev_atom_ = index;
  }

  void connect(int a, int b, const std::optional<PendingBond> &pending,
               std::size_t at) {
    if (a == b) throw ParseError(at, "ring bond to self");
    if (mol_.find_bond(a, b)) throw ParseError(at, "duplicate bond");
    Bond bond;
    bond.a = a;
    bond.b = b;
    if (pending) {
      bond.order = pending->order;
      bond.geometry = pending->geometry;
    } else if (mol_.atoms[a].aromatic && mol_.atoms[b].aromatic) {
      bond.order = BondOrder::Aromatic;
    }
    if (bond.order == BondOrder::Aromatic &&
        (!mol_.atoms[a].aromatic || !mol_.atoms[b].aromatic)) {
      throw ParseError(at, "aromatic bond between non-aromatic atoms");
    }
    mol_.bonds.push_back(bond);
  }

  void ring_closure() {
    if (prev_atom_ < 0) throw ParseError(pos_, "ring closure with no atom");
    std::size_t at = pos_;
    int number = 0;
    if (peek() == '%') {
      if (pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        throw ParseError(pos_, "malformed %nn ring closure");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = peek() - '0';
      ++pos_;
    }
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_[number] = RingOpening{prev_atom_, pending_, at};
      pending_.reset();
      return;
    }
    RingOpening open = it->second;
    open_rings_.erase(it);
    std::optional<PendingBond> bond = merge_ring_bonds(open.bond, pending_, at);
    pending_.reset();
    // Orient an annotated geometry from the atom whose side carried the
    // symbol toward the other endpoint.
    if (bond && bond->geometry && !open.bond) {
      // annotated at close only: direction close -> open
      connect_ring(prev_atom_, open.atom, bond, at);
      return;
    }
    connect_ring(open.atom, prev_atom_, bond, at);
  }

  void connect_ring(int from, int to, const std::optional<PendingBond> &bond,
                    std::size_t at) {
    connect(from, to, bond, at);
  }

  static std::optional<PendingBond> merge_ring_bonds(
      const std::optional<PendingBond> &open,
      const std::optional<PendingBond> &close, std::size_t at) {
    if (!open) return close;
    if (!close) return open;
    if (open->order != close->order) {
      throw ParseError(at, "conflicting ring bond orders");
    }
    if (open->geometry && close->geometry) {
      // Same directed attribute looks inverted from the two ends.
      if (*open->geometry == *close->geometry) {
        throw ParseError(at, "conflicting ring bond geometry");
      }
    }
    return open;
  }

  void organic_atom() {
    std::size_t at = pos_;
    char c = peek();
    Atom atom;
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string two;
      two += c;
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        two += text_[pos_ + 1];
      }
      if (two.size() == 2 && organic_subset_element(two)) {
        atom.element = two;
        pos_ += 2;
      } else if (organic_subset_element(std::string(1, c))) {
        atom.element = std::string(1, c);
        ++pos_;
      } else {
        throw ParseError(at, "unknown element symbol '" + two + "'");
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      static const std::set<std::string> aromatic_organic = {"b", "c", "n",
                                                             "o", "p", "s"};
      if (!aromatic_organic.count(sym)) {
        throw ParseError(at, "unknown element symbol '" + sym + "'");
      }
      atom.element = upcase_first(sym);
      atom.aromatic = true;
      ++pos_;
    } else {
      throw ParseError(at, std::string("unexpected character '") + c + "'");
    }
    atom.implicit_h = true;  // resolved in finish()
    add_atom(std::move(atom), at);
  }

  void bracket_atom() {
    std::size_t at = pos_;
    ++pos_;  // '['
    Atom atom;
    // isotope
    int isotope = 0;
    bool has_isotope = false;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      isotope = isotope * 10 + (peek() - '0');
      has_isotope = true;
      ++pos_;
    }
    if (has_isotope) atom.isotope = isotope;
    if (eof()) throw ParseError(at, "unterminated bracket atom");
    // element symbol
    char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      ++pos_;
      if (!eof() && std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = sym + peek();
        if (known_element(two)) {
          sym = two;
          ++pos_;
        }
      }
      if (!known_element(sym)) {
        throw ParseError(at, "unknown element symbol '" + sym + "'");
      }
      atom.element = sym;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      ++pos_;
      if (!eof() && std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = sym + peek();
        if (aromatic_bracket_elements().count(two)) {
          sym = two;
          ++pos_;
        }
      }
      if (!aromatic_bracket_elements().count(sym)) {
        throw ParseError(at, "unknown aromatic symbol '" + sym + "'");
      }
      atom.element = upcase_first(sym);
      atom.aromatic = true;
    } else {
      throw ParseError(pos_, "missing element symbol in bracket");
    }
    // chirality
    if (!eof() && peek() == '@') {
      ++pos_;
      if (!eof() && peek() == '@') {
        atom.chirality = Chirality::Clockwise;
        ++pos_;
      } else {
        atom.chirality = Chirality::Counterclockwise;
      }
    }
    // hydrogen count
    if (!eof() && peek() == 'H') {
      ++pos_;
      int h = 1;
      if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        h = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          h = h * 10 + (peek() - '0');
          ++pos_;
        }
      }
      atom.hydrogens = h;
    }
    // charge
    if (!eof() && (peek() == '+' || peek() == '-')) {
      char sign = peek();
      ++pos_;
      int magnitude = 1;
      if (!eof() && peek() == sign) {  // legacy ++ / --
        magnitude = 2;
        ++pos_;
      } else if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = magnitude * 10 + (peek() - '0');
          ++pos_;
        }
        if (magnitude == 0) throw ParseError(pos_, "malformed charge");
      }
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }
    // atom map (accepted, not carried on the graph)
    if (!eof() && peek() == ':') {
      ++pos_;
      if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        throw ParseError(pos_, "malformed atom map");
      }
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (eof() || peek() != ']') {
      throw ParseError(eof() ? text_.size() : pos_,
                       "unterminated bracket atom");
    }
    ++pos_;
    add_atom(std::move(atom), at);
  }

  void finish() {
    if (pending_) throw ParseError(pending_pos_, "dangling bond");
    if (!branch_stack_.empty()) {
      throw ParseError(text_.size(), "unclosed branch");
    }
    if (!open_rings_.empty()) {
      std::ostringstream msg;
      msg << "unclosed ring bond " << open_rings_.begin()->first;
      throw ParseError(open_rings_.begin()->second.position, msg.str());
    }
    for (std::size_t i = 0; i < mol_.atoms.size(); ++i) {
      Atom &atom = mol_.atoms[i];
      if (!atom.implicit_h) continue;
      auto h = implied_hydrogens(atom.element,
                                 mol_.bond_order_sum(static_cast<int>(i)));
      if (!h) {
        throw ParseError(atom_pos_[i],
                         "valence violation on " + atom.element);
      }
      atom.hydrogens = *h;
    }
  }
};

}  // namespace

Molecule parse_smiles(std::string_view smiles) {
  return Parser(smiles).run();
}

namespace {

bool writable_bare(const Molecule &m, int index) {
  const Atom &atom = m.atoms[index];
  if (atom.charge != 0 || atom.isotope || atom.chirality) return false;
  if (!organic_subset_element(atom.element)) return false;
  if (atom.aromatic) {
    static const std::set<std::string> aromatic_bare = {"B", "C", "N",
                                                        "O", "P", "S"};
    if (!aromatic_bare.count(atom.element)) return false;
  }
  auto h = implied_hydrogens(atom.element, m.bond_order_sum(index));
  return h && *h == atom.hydrogens;
}

std::string atom_token(const Molecule &m, int index) {
  const Atom &atom = m.atoms[index];
  std::string sym = atom.element;
  if (atom.aromatic) {
    for (char &c : sym) c = static_cast<char>(std::tolower(c));
  }
  if (writable_bare(m, index)) return sym;
  std::string out = "[";
  if (atom.isotope) out += std::to_string(*atom.isotope);
  out += sym;
  if (atom.chirality) {
    out += *atom.chirality == Chirality::Clockwise ? "@@" : "@";
  }
  if (atom.hydrogens == 1) {
    out += "H";
  } else if (atom.hydrogens > 1) {
    out += "H" + std::to_string(atom.hydrogens);
  }
  if (atom.charge > 0) {
    out += "+";
    if (atom.charge > 1) out += std::to_string(atom.charge);
  } else if (atom.charge < 0) {
    out += "-";
    if (atom.charge < -1) out += std::to_string(-atom.charge);
  }
  out += "]";
  return out;
}

// Bond symbol when traversing from `from` to `to`; empty for defaults.
std::string bond_token(const Molecule &m, const Bond &bond, int from) {
  switch (bond.order) {
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic:
      return m.atoms[bond.a].aromatic && m.atoms[bond.b].aromatic ? "" : ":";
    case BondOrder::Single: break;
  }
  if (bond.geometry) {
    bool forward = bond.a == from;
    bool up = *bond.geometry == BondGeometry::Up;
    return (up == forward) ? "/" : "\\";
  }
  if (m.atoms[bond.a].aromatic && m.atoms[bond.b].aromatic) return "-";
  return "";
}

struct Writer {
  const Molecule &mol;
  const std::vector<int> &rank;
  std::vector<std::vector<std::pair<int, int>>> adjacency;  // (neighbor, bond)
  std::vector<bool> is_ring_bond;
  std::vector<std::vector<int>> ring_at_atom;  // ring bond indices, DFS order
  std::map<int, int> ring_digit;               // bond index -> open digit
  std::set<int> free_digits;
  std::string out;

  Writer(const Molecule &m, const std::vector<int> &r) : mol(m), rank(r) {
    adjacency.resize(m.atoms.size());
    for (std::size_t i = 0; i < m.bonds.size(); ++i) {
      adjacency[m.bonds[i].a].push_back({m.bonds[i].b, static_cast<int>(i)});
      adjacency[m.bonds[i].b].push_back({m.bonds[i].a, static_cast<int>(i)});
    }
    for (auto &nbrs : adjacency) {
      std::sort(nbrs.begin(), nbrs.end(), [&](const auto &x, const auto &y) {
        if (rank[x.first] != rank[y.first])
          return rank[x.first] < rank[y.first];
        return x.first < y.first;
      });
    }
    is_ring_bond.assign(m.bonds.size(), false);
    ring_at_atom.resize(m.atoms.size());
    for (int d = 1; d < 100; ++d) free_digits.insert(d);
  }

  // DFS in emission order marking non-tree bonds as ring closures; the
  // earlier-emitted endpoint opens the digit.
  void classify(int start) {
    std::vector<bool> seen(mol.atoms.size(), false);
    std::vector<bool> done(mol.bonds.size(), false);
    seen[start] = true;
    classify_visit(start, seen, done);
  }

  void classify_visit(int u, std::vector<bool> &seen,
                      std::vector<bool> &done) {
    for (const auto &[v, bond] : adjacency[u]) {
      if (done[bond]) continue;
      done[bond] = true;
      if (seen[v]) {
        is_ring_bond[bond] = true;
        ring_at_atom[v].push_back(bond);
        ring_at_atom[u].push_back(bond);
      } else {
        seen[v] = true;
        classify_visit(v, seen, done);
      }
    }
  }

  void emit(int start) {
    classify(start);
    emit_atom(start, -1);
  }

  static std::string ring_token(int digit) {
    if (digit >= 10) return "%" + std::to_string(digit);
    return std::to_string(digit);
  }

  void emit_atom(int u, int parent_bond) {
    out += atom_token(mol, u);
    for (int bond : ring_at_atom[u]) {
      auto it = ring_digit.find(bond);
      if (it == ring_digit.end()) {
        int digit = *free_digits.begin();
        free_digits.erase(free_digits.begin());
        ring_digit[bond] = digit;
        out += bond_token(mol, mol.bonds[bond], u);
        out += ring_token(digit);
      } else {
        out += ring_token(it->second);
        free_digits.insert(it->second);
        ring_digit.erase(it);
      }
    }
    std::vector<std::pair<int, int>> children;
    for (const auto &[v, bond] : adjacency[u]) {
      if (bond == parent_bond || is_ring_bond[bond]) continue;
      children.push_back({v, bond});
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
      const auto &[v, bond] = children[i];
      std::string token = bond_token(mol, mol.bonds[bond], u);
      if (i + 1 < children.size()) {
        out += "(" + token;
        emit_atom(v, bond);
        out += ")";
      } else {
        out += token;
        emit_atom(v, bond);
      }
    }
  }
};

}  // namespace

std::string write_smiles(const Molecule &molecule,
                         const std::vector<int> &ranking) {
  auto comps = molecule.components();
  // components ordered by their lowest-ranked atom
  std::sort(comps.begin(), comps.end(), [&](const auto &x, const auto &y) {
    int rx = ranking[x[0]], ry = ranking[y[0]];
    for (int a : x) rx = std::min(rx, ranking[a]);
    for (int a : y) ry = std::min(ry, ranking[a]);
    return rx < ry;
  });
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) out += ".";
    int start = comps[i][0];
    for (int a : comps[i]) {
      if (ranking[a] < ranking[start]) start = a;
    }
    Writer writer(molecule, ranking);
    writer.emit(start);
    out += writer.out;
  }
  return out;
}

std::string write_smiles(const Molecule &molecule) {
  std::vector<int> identity(molecule.atoms.size());
  for (std::size_t i = 0; i < identity.size(); ++i) {
    identity[i] = static_cast<int>(i);
  }
  return write_smiles(molecule, identity);
}

ValidityReport validate(std::string_view text) {
  ValidityReport report;
  try {
    std::string canonical = canonicalize(text);
    report.valid = true;
    report.canonical = canonical == text;
  } catch (const ParseError &err) {
    report.valid = false;
    report.failure_reason = err.reason();
  }
  return report;
}

}  // namespace enzybench::chem
