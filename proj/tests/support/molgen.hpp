#pragma once

// Test-support random molecule generator. Valence-safe by construction and
// independent of the parser under test: molecules are built as graphs and
// only then written to SMILES, so parser/writer/canonicalizer round-trips
// can be checked against a known ground truth.

#include <string>
#include <vector>

#include "enzybench/chem/molecule.hpp"
#include "enzybench/chem/smiles.hpp"
#include "enzybench/util/rng.hpp"

namespace molgen {

using enzybench::Rng;
using enzybench::chem::Atom;
using enzybench::chem::Bond;
using enzybench::chem::BondGeometry;
using enzybench::chem::BondOrder;
using enzybench::chem::Chirality;
using enzybench::chem::Molecule;

struct AtomKind {
  const char *element;
  int capacity;  // after charge adjustment
  int charge;
  bool bracket;  // force bracket form
};

inline const std::vector<AtomKind> &atom_kinds() {
  static const std::vector<AtomKind> kinds = {
      {"C", 4, 0, false}, {"C", 4, 0, false}, {"C", 4, 0, false},
      {"C", 4, 0, false}, {"N", 3, 0, false}, {"O", 2, 0, false},
      {"S", 2, 0, false}, {"P", 3, 0, false}, {"F", 1, 0, false},
      {"Cl", 1, 0, false}, {"Br", 1, 0, false}, {"B", 3, 0, false},
      {"N", 4, 1, true},  {"O", 1, -1, true},  {"S", 3, 1, true},
      {"Fe", 2, 2, true},
  };
  return kinds;
}

inline int used_valence(const Molecule &m, int atom) {
  int used = 0;
  for (const Bond &b : m.bonds) {
    if (b.a != atom && b.b != atom) continue;
    switch (b.order) {
      case BondOrder::Single: used += 1; break;
      case BondOrder::Double: used += 2; break;
      case BondOrder::Triple: used += 3; break;
      case BondOrder::Aromatic: used += 1; break;
    }
  }
  return used;
}

// capacities parallel to atoms
inline Molecule random_molecule(Rng &rng, int n_atoms,
                                bool decorations = true) {
  Molecule m;
  std::vector<int> capacity;
  auto add = [&]() {
    const AtomKind &kind = atom_kinds()[rng.below(atom_kinds().size())];
    Atom atom;
    atom.element = kind.element;
    atom.charge = kind.charge;
    if (decorations && kind.bracket && rng.unit() < 0.5) {
      // leave as bracket with explicit hydrogens, maybe isotope/chirality
      if (rng.unit() < 0.2) atom.isotope = 13;
    } else if (decorations && !kind.bracket && kind.capacity == 4 &&
               rng.unit() < 0.10) {
      atom.chirality = rng.unit() < 0.5 ? Chirality::Clockwise
                                        : Chirality::Counterclockwise;
    }
    m.atoms.push_back(atom);
    capacity.push_back(kind.capacity);
  };
  add();
  while (static_cast<int>(m.atoms.size()) < n_atoms) {
    add();
    int i = static_cast<int>(m.atoms.size()) - 1;
    std::vector<int> anchors;
    for (int a = 0; a < i; ++a) {
      if (capacity[a] - used_valence(m, a) >= 1) anchors.push_back(a);
    }
    if (anchors.empty()) {
      m.atoms.pop_back();
      capacity.pop_back();
      break;
    }
    int anchor = anchors[static_cast<std::size_t>(rng.below(anchors.size()))];
    Bond bond;
    bond.a = anchor;
    bond.b = i;
    int spare_a = capacity[anchor] - used_valence(m, anchor);
    int spare_b = capacity[i];
    if (spare_a >= 3 && spare_b >= 3 && rng.unit() < 0.05) {
      bond.order = BondOrder::Triple;
    } else if (spare_a >= 2 && spare_b >= 2 && rng.unit() < 0.18) {
      bond.order = BondOrder::Double;
    } else if (decorations && rng.unit() < 0.08) {
      bond.geometry = rng.unit() < 0.5 ? BondGeometry::Up : BondGeometry::Down;
    }
    m.bonds.push_back(bond);
  }
  // up to two extra ring bonds
  int rings = static_cast<int>(rng.below(3));
  for (int k = 0; k < rings; ++k) {
    if (m.atoms.size() < 4) break;
    for (int attempt = 0; attempt < 10; ++attempt) {
      int a = static_cast<int>(rng.below(m.atoms.size()));
      int b = static_cast<int>(rng.below(m.atoms.size()));
      if (a == b || m.find_bond(a, b)) continue;
      if (capacity[a] - used_valence(m, a) < 1) continue;
      if (capacity[b] - used_valence(m, b) < 1) continue;
      m.bonds.push_back(Bond{a, b, BondOrder::Single, {}});
      break;
    }
  }
  // explicit hydrogen counts; bracket atoms keep them verbatim, organic
  // bare atoms re-derive them at parse time from the same valence model
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    int spare = capacity[i] - used_valence(m, static_cast<int>(i));
    m.atoms[i].hydrogens = spare > 0 ? spare : 0;
  }
  return m;
}

inline std::vector<int> random_ranking(Rng &rng, std::size_t n) {
  std::vector<int> ranking(n);
  for (std::size_t i = 0; i < n; ++i) ranking[i] = static_cast<int>(i);
  rng.shuffle(ranking);
  return ranking;
}

inline std::string random_smiles(const Molecule &m, Rng &rng) {
  return enzybench::chem::write_smiles(m, random_ranking(rng, m.atoms.size()));
}

}  // namespace molgen
