#include "enzybench/chem/canonical.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "enzybench/chem/smiles.hpp"
#include "enzybench/util/error.hpp"

namespace enzybench::chem {

namespace {

// Hard ceiling on tie-break exploration; far beyond anything a chemical
// graph produces, and better to fail loudly than return an order-dependent
// string.
constexpr int kMaxLeaves = 50000;

std::vector<int> dense_ranks(std::vector<std::pair<std::vector<long long>,
                                                   int>> keyed) {
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> ranks(keyed.size());
  int rank = -1;
  const std::vector<long long> *prev = nullptr;
  for (const auto &[key, atom] : keyed) {
    if (!prev || key != *prev) ++rank;
    prev = &key;
    ranks[atom] = rank;
  }
  return ranks;
}

std::vector<int> initial_ranks(const Molecule &m) {
  std::vector<std::pair<std::vector<long long>, int>> keyed;
  keyed.reserve(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const Atom &a = m.atoms[i];
    std::vector<long long> key;
    // element packed as bytes so the tuple stays homogeneous
    long long sym = 0;
    for (char c : a.element) sym = sym * 256 + static_cast<unsigned char>(c);
    key.push_back(sym);
    key.push_back(m.degree(static_cast<int>(i)));
    key.push_back(a.charge);
    key.push_back(a.hydrogens);
    key.push_back(a.aromatic ? 1 : 0);
    key.push_back(a.isotope ? *a.isotope : LLONG_MIN);
    keyed.push_back({std::move(key), static_cast<int>(i)});
  }
  return dense_ranks(std::move(keyed));
}

class ComponentCanonicalizer {
 public:
  explicit ComponentCanonicalizer(const Molecule &m) : mol_(m) {
    adjacency_.resize(m.atoms.size());
    for (const Bond &b : m.bonds) {
      adjacency_[b.a].push_back(b.b);
      adjacency_[b.b].push_back(b.a);
    }
  }

  // Returns (canonical string, ranks producing it).
  std::pair<std::string, std::vector<int>> run() {
    search(refine(initial_ranks(mol_)));
    return {best_, best_ranks_};
  }

 private:
  const Molecule &mol_;
  std::vector<std::vector<int>> adjacency_;
  std::string best_;
  std::vector<int> best_ranks_;
  bool has_best_ = false;
  int leaves_ = 0;

  std::vector<int> refine(std::vector<int> ranks) const {
    for (;;) {
      std::vector<std::pair<std::vector<long long>, int>> keyed;
      keyed.reserve(ranks.size());
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        std::vector<long long> key{ranks[i]};
        std::vector<long long> nbrs;
        for (int v : adjacency_[i]) nbrs.push_back(ranks[v]);
        std::sort(nbrs.begin(), nbrs.end());
        key.insert(key.end(), nbrs.begin(), nbrs.end());
        keyed.push_back({std::move(key), static_cast<int>(i)});
      }
      std::vector<int> next = dense_ranks(std::move(keyed));
      if (next == ranks) return ranks;
      ranks = std::move(next);
    }
  }

  // Lowest rank value shared by more than one atom, or -1 when discrete.
  int tied_rank(const std::vector<int> &ranks) const {
    std::map<int, int> counts;
    for (int r : ranks) ++counts[r];
    for (const auto &[r, n] : counts) {
      if (n > 1) return r;
    }
    return -1;
  }

  void search(const std::vector<int> &ranks) {
    int tied = tied_rank(ranks);
    if (tied < 0) {
      if (++leaves_ > kMaxLeaves) {
        throw Error("canonicalization tie exploration exceeded its cap");
      }
      std::string s = write_smiles(mol_, ranks);
      if (!has_best_ || s < best_) {
        best_ = std::move(s);
        best_ranks_ = ranks;
        has_best_ = true;
      }
      return;
    }
    for (std::size_t a = 0; a < ranks.size(); ++a) {
      if (ranks[a] != tied) continue;
      std::vector<std::pair<std::vector<long long>, int>> keyed;
      keyed.reserve(ranks.size());
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        keyed.push_back({{ranks[i], i == a ? 0 : 1}, static_cast<int>(i)});
      }
      search(refine(dense_ranks(std::move(keyed))));
    }
  }
};

Molecule extract_component(const Molecule &m, const std::vector<int> &atoms,
                           std::vector<int> &index_map) {
  Molecule sub;
  index_map.assign(m.atoms.size(), -1);
  for (int a : atoms) {
    index_map[a] = static_cast<int>(sub.atoms.size());
    sub.atoms.push_back(m.atoms[a]);
  }
  for (const Bond &b : m.bonds) {
    if (index_map[b.a] < 0 || index_map[b.b] < 0) continue;
    Bond nb = b;
    nb.a = index_map[b.a];
    nb.b = index_map[b.b];
    sub.bonds.push_back(nb);
  }
  return sub;
}

struct CanonicalComponent {
  std::string smiles;
  std::vector<int> atoms;       // original indices
  std::vector<int> local_ranks; // ranks within the component, by local index
};

std::vector<CanonicalComponent> canonical_components(const Molecule &m) {
  std::vector<CanonicalComponent> out;
  for (const auto &atoms : m.components()) {
    std::vector<int> index_map;
    Molecule sub = extract_component(m, atoms, index_map);
    ComponentCanonicalizer canon(sub);
    auto [smiles, ranks] = canon.run();
    out.push_back({std::move(smiles), atoms, std::move(ranks)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CanonicalComponent &x,
                      const CanonicalComponent &y) {
                     return x.smiles < y.smiles;
                   });
  return out;
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &molecule) {
  std::vector<int> ranks(molecule.atoms.size(), 0);
  int offset = 0;
  for (const auto &comp : canonical_components(molecule)) {
    for (std::size_t local = 0; local < comp.atoms.size(); ++local) {
      ranks[comp.atoms[local]] = offset + comp.local_ranks[local];
    }
    offset += static_cast<int>(comp.atoms.size());
  }
  return ranks;
}

std::string canonical_smiles(const Molecule &molecule) {
  std::string out;
  bool first = true;
  for (const auto &comp : canonical_components(molecule)) {
    if (!first) out += ".";
    out += comp.smiles;
    first = false;
  }
  return out;
}

std::string canonicalize(std::string_view smiles) {
  return canonical_smiles(parse_smiles(smiles));
}

}  // namespace enzybench::chem
