#include "enzybench/chem/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <string>
#include <vector>

#include "enzybench/util/hash.hpp"

namespace enzybench::chem {

BitFingerprint::BitFingerprint(int length)
    : length_(length), blocks_((length + 63) / 64, 0) {}

int BitFingerprint::popcount() const {
  int total = 0;
  for (std::uint64_t block : blocks_) total += std::popcount(block);
  return total;
}

bool BitFingerprint::test(int bit) const {
  return (blocks_[bit / 64] >> (bit % 64)) & 1u;
}

void BitFingerprint::set(int bit) {
  blocks_[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

BitFingerprint BitFingerprint::operator&(const BitFingerprint &other) const {
  if (length_ != other.length_) {
    throw LengthMismatch("fingerprint length mismatch");
  }
  BitFingerprint out(length_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    out.blocks_[i] = blocks_[i] & other.blocks_[i];
  }
  return out;
}

BitFingerprint BitFingerprint::operator|(const BitFingerprint &other) const {
  if (length_ != other.length_) {
    throw LengthMismatch("fingerprint length mismatch");
  }
  BitFingerprint out(length_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    out.blocks_[i] = blocks_[i] | other.blocks_[i];
  }
  return out;
}

BitFingerprint BitFingerprint::operator^(const BitFingerprint &other) const {
  if (length_ != other.length_) {
    throw LengthMismatch("fingerprint length mismatch");
  }
  BitFingerprint out(length_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    out.blocks_[i] = blocks_[i] ^ other.blocks_[i];
  }
  return out;
}

namespace {

std::string path_atom_token(const Atom &atom) {
  std::string token = atom.element;
  if (atom.aromatic) {
    for (char &c : token) c = static_cast<char>(std::tolower(c));
  }
  if (atom.charge > 0) {
    token += "+" + std::to_string(atom.charge);
  } else if (atom.charge < 0) {
    token += "-" + std::to_string(-atom.charge);
  }
  return token;
}

char path_bond_token(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return '-';
    case BondOrder::Double: return '=';
    case BondOrder::Triple: return '#';
    case BondOrder::Aromatic: return ':';
  }
  return '-';
}

struct PathEnumerator {
  const Molecule &mol;
  int max_path;
  BitFingerprint &fp;
  int n_bits;
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  std::vector<bool> on_path;
  std::vector<std::string> atom_tokens;
  std::vector<int> path_atoms;
  std::vector<char> path_bonds;

  PathEnumerator(const Molecule &m, int max_len, BitFingerprint &out,
                 int bits)
      : mol(m), max_path(max_len), fp(out), n_bits(bits) {
    adjacency.resize(m.atoms.size());
    for (std::size_t i = 0; i < m.bonds.size(); ++i) {
      adjacency[m.bonds[i].a].push_back({m.bonds[i].b, static_cast<int>(i)});
      adjacency[m.bonds[i].b].push_back({m.bonds[i].a, static_cast<int>(i)});
    }
    on_path.assign(m.atoms.size(), false);
    atom_tokens.reserve(m.atoms.size());
    for (const Atom &a : m.atoms) atom_tokens.push_back(path_atom_token(a));
  }

  void run() {
    for (std::size_t start = 0; start < mol.atoms.size(); ++start) {
      path_atoms.assign(1, static_cast<int>(start));
      path_bonds.clear();
      on_path[start] = true;
      record();
      extend(static_cast<int>(start));
      on_path[start] = false;
    }
  }

  void extend(int tip) {
    if (static_cast<int>(path_bonds.size()) >= max_path) return;
    for (const auto &[next, bond] : adjacency[tip]) {
      if (on_path[next]) continue;
      on_path[next] = true;
      path_atoms.push_back(next);
      path_bonds.push_back(path_bond_token(mol.bonds[bond].order));
      record();
      extend(next);
      on_path[next] = false;
      path_atoms.pop_back();
      path_bonds.pop_back();
    }
  }

  void record() {
    std::string forward;
    std::string backward;
    const std::size_t n = path_atoms.size();
    for (std::size_t i = 0; i < n; ++i) {
      forward += atom_tokens[path_atoms[i]];
      if (i + 1 < n) forward += path_bonds[i];
      backward += atom_tokens[path_atoms[n - 1 - i]];
      if (i + 1 < n) backward += path_bonds[n - 2 - i];
    }
    const std::string &canonical = forward <= backward ? forward : backward;
    fp.set(static_cast<int>(fnv1a(canonical) % n_bits));
  }
};

}  // namespace

BitFingerprint path_fingerprint(const Molecule &molecule, int n_bits,
                                int max_path) {
  BitFingerprint fp(n_bits);
  PathEnumerator walker(molecule, max_path, fp, n_bits);
  walker.run();
  return fp;
}

BitFingerprint circular_fingerprint(const Molecule &molecule, int n_bits,
                                    int radius) {
  BitFingerprint fp(n_bits);
  const std::size_t n = molecule.atoms.size();
  std::vector<std::vector<std::pair<int, int>>> adjacency(n);
  for (const Bond &b : molecule.bonds) {
    int order = static_cast<int>(b.order);
    adjacency[b.a].push_back({b.b, order});
    adjacency[b.b].push_back({b.a, order});
  }
  std::vector<std::uint64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom &a = molecule.atoms[i];
    std::string token = path_atom_token(a);
    token += "|d" + std::to_string(adjacency[i].size());
    token += "|h" + std::to_string(a.hydrogens);
    if (a.isotope) token += "|i" + std::to_string(*a.isotope);
    ids[i] = fnv1a(token);
    fp.set(static_cast<int>(ids[i] % n_bits));
  }
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(ids);
    for (std::size_t i = 0; i < n; ++i) {
      if (adjacency[i].empty()) continue;  // isolated atoms stop at radius 0
      std::vector<std::pair<int, std::uint64_t>> env;
      env.reserve(adjacency[i].size());
      for (const auto &[nbr, order] : adjacency[i]) {
        env.push_back({order, ids[nbr]});
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = fnv1a_u64(ids[i]);
      for (const auto &[order, id] : env) {
        h = fnv1a_u64(static_cast<std::uint64_t>(order), h);
        h = fnv1a_u64(id, h);
      }
      next[i] = h;
      fp.set(static_cast<int>(h % n_bits));
    }
    ids = std::move(next);
  }
  return fp;
}

double tanimoto(const BitFingerprint &a, const BitFingerprint &b) {
  if (a.length() != b.length()) {
    throw LengthMismatch("tanimoto over fingerprints of different length");
  }
  int inter = 0;
  int uni = 0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    inter += std::popcount(a.blocks()[i] & b.blocks()[i]);
    uni += std::popcount(a.blocks()[i] | b.blocks()[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace enzybench::chem
