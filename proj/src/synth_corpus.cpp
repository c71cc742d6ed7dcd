#include "enzybench/synth/synth.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "enzybench/chem/canonical.hpp"
#include "enzybench/chem/smiles.hpp"
#include "enzybench/util/error.hpp"
#include "enzybench/util/rng.hpp"

namespace enzybench::synth {

namespace {

using chem::Atom;
using chem::Bond;
using chem::BondOrder;
using chem::Molecule;

int element_capacity(const std::string &element) {
  if (element == "C") return 4;
  if (element == "N" || element == "P" || element == "B") return 3;
  if (element == "O" || element == "S") return 2;
  return 1;  // halogens
}

int used_valence(const Molecule &m, int atom) {
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

int free_valence(const Molecule &m, int atom) {
  return element_capacity(m.atoms[atom].element) - used_valence(m, atom);
}

void add_atom(Molecule &m, const std::string &element) {
  Atom atom;
  atom.element = element;
  atom.implicit_h = true;
  m.atoms.push_back(atom);
}

// Base molecules and variant motifs stay on C/N/O; the rare elements are
// reserved for class signature motifs so their fingerprint bits never
// cancel against the rest of the reaction.
std::string pick_element(Rng &rng, bool hetero_rich) {
  double roll = rng.unit();
  if (hetero_rich) {
    if (roll < 0.40) return "C";
    if (roll < 0.70) return "O";
    return "N";
  }
  if (roll < 0.70) return "C";
  if (roll < 0.85) return "O";
  if (roll < 0.95) return "N";
  return "C";
}

// Random connected molecule; spanning tree plus at most one ring bond,
// occasional double bonds. Valence-safe by construction.
Molecule make_molecule(Rng &rng, int n_atoms, bool hetero_rich = false) {
  Molecule m;
  add_atom(m, "C");
  for (int i = 1; i < n_atoms; ++i) {
    add_atom(m, pick_element(rng, hetero_rich));
    // candidates with a free slot
    std::vector<int> anchors;
    for (int a = 0; a < i; ++a) {
      if (free_valence(m, a) >= 1) anchors.push_back(a);
    }
    if (anchors.empty()) {
      m.atoms.pop_back();
      break;
    }
    int anchor = anchors[rng.below(anchors.size())];
    Bond bond;
    bond.a = anchor;
    bond.b = i;
    if (rng.unit() < 0.14 && free_valence(m, anchor) >= 2 &&
        element_capacity(m.atoms[i].element) >= 2) {
      bond.order = BondOrder::Double;
    }
    m.bonds.push_back(bond);
  }
  if (m.atoms.size() >= 5 && rng.unit() < 0.30) {
    // one extra ring bond between valence-free atoms at distance >= 2
    for (int attempt = 0; attempt < 8; ++attempt) {
      int a = static_cast<int>(rng.below(m.atoms.size()));
      int b = static_cast<int>(rng.below(m.atoms.size()));
      if (a == b || m.find_bond(a, b)) continue;
      if (free_valence(m, a) < 1 || free_valence(m, b) < 1) continue;
      m.bonds.push_back(Bond{a, b, BondOrder::Single, {}});
      break;
    }
  }
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    auto h = chem::implied_hydrogens(m.atoms[i].element,
                                     m.bond_order_sum(static_cast<int>(i)));
    m.atoms[i].hydrogens = h ? *h : 0;
  }
  return m;
}

// Graft `fragment` onto `base` with a single bond from a random base atom
// with spare valence to fragment atom 0.
Molecule attach(const Molecule &base, const Molecule &fragment, Rng &rng) {
  Molecule out = base;
  std::vector<int> anchors;
  for (std::size_t a = 0; a < out.atoms.size(); ++a) {
    if (free_valence(out, static_cast<int>(a)) >= 1) {
      anchors.push_back(static_cast<int>(a));
    }
  }
  int offset = static_cast<int>(out.atoms.size());
  for (const Atom &atom : fragment.atoms) out.atoms.push_back(atom);
  for (const Bond &bond : fragment.bonds) {
    Bond nb = bond;
    nb.a += offset;
    nb.b += offset;
    out.bonds.push_back(nb);
  }
  if (!anchors.empty() && free_valence(out, offset) >= 1) {
    int anchor = anchors[rng.below(anchors.size())];
    out.bonds.push_back(Bond{anchor, offset, BondOrder::Single, {}});
  }
  for (std::size_t i = 0; i < out.atoms.size(); ++i) {
    auto h = chem::implied_hydrogens(out.atoms[i].element,
                                     out.bond_order_sum(static_cast<int>(i)));
    out.atoms[i].hydrogens = h ? *h : 0;
  }
  return out;
}

std::string random_order_smiles(const Molecule &m, Rng &rng) {
  std::vector<int> ranking(m.atoms.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    ranking[i] = static_cast<int>(i);
  }
  rng.shuffle(ranking);
  return chem::write_smiles(m, ranking);
}

// Tiny rare-element motifs, one per main class. Their fingerprint bits
// occur nowhere else, so a handful of training reactions suffices to tie
// them to the class.
// One rare-element motif out of the class's signature family. Rare
// elements never repeat across classes, so partially learned motifs stay
// unambiguous; the variant arm reshapes every fingerprint environment so
// each family member has to be learned on its own.
Molecule class_signature(int main_class, int variant) {
  // atom 0 is the attachment root and keeps a spare valence slot
  std::vector<const char *> elements;
  std::vector<std::pair<int, int>> bonds;
  switch (main_class) {
    case 1: elements = {"C", "P", "O", "O"}; bonds = {{0, 1}, {1, 2}, {1, 3}};
      break;
    case 2: elements = {"C", "S", "S"}; bonds = {{0, 1}, {1, 2}}; break;
    case 3: elements = {"C", "Cl", "Cl"}; bonds = {{0, 1}, {0, 2}}; break;
    case 4: elements = {"C", "Br", "C", "Br"};
      bonds = {{0, 1}, {0, 2}, {2, 3}};
      break;
    case 5: elements = {"C", "I", "I"}; bonds = {{0, 1}, {0, 2}}; break;
    case 6: elements = {"C", "B", "O", "O"}; bonds = {{0, 1}, {1, 2}, {1, 3}};
      break;
    default: elements = {"C", "P", "S"}; bonds = {{0, 1}, {1, 2}}; break;
  }
  Molecule m;
  for (const char *element : elements) add_atom(m, element);
  for (auto [a, b] : bonds) {
    m.bonds.push_back(Bond{a, b, BondOrder::Single, {}});
  }
  // variant arm on the root: a short chain whose length and composition
  // reshape the rare atoms' neighborhoods
  int arm_length = 1 + variant % 3;
  bool arm_oxygen = (variant / 3) % 2 == 1;
  int previous = 0;
  for (int i = 0; i < arm_length; ++i) {
    const char *element =
        (arm_oxygen && i + 1 == arm_length) ? "O" : "C";
    add_atom(m, element);
    int index = static_cast<int>(m.atoms.size()) - 1;
    m.bonds.push_back(Bond{previous, index, BondOrder::Single, {}});
    previous = index;
  }
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    auto h = chem::implied_hydrogens(m.atoms[i].element,
                                     m.bond_order_sum(static_cast<int>(i)));
    m.atoms[i].hydrogens = h ? *h : 0;
  }
  return m;
}

// EC taxonomy with class-1-heavy branching, echoing the corpus this
// imitates: class 1 has many subclasses, class 6 only a few.
struct Taxonomy {
  // per class: weight, subclass count
  std::vector<double> weights{0.30, 0.23, 0.20, 0.11, 0.08, 0.08};
  std::vector<int> subclasses{9, 7, 6, 5, 4, 3};

  int sample_class(Rng &rng) const {
    double roll = rng.unit();
    double acc = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
      acc += weights[c];
      if (roll < acc) return static_cast<int>(c) + 1;
    }
    return static_cast<int>(weights.size());
  }
};

}  // namespace

std::string synth_corpus_text(const SynthConfig &config) {
  Rng rng(config.seed);
  Taxonomy taxonomy;

  // class/subclass motif fragments; variant v perturbs the base motif so
  // low-data training sees only part of each subclass's vocabulary
  std::map<std::string, Molecule> fragments;
  auto fragment_for = [&](int c, int sc, int variant) -> const Molecule & {
    std::string key = std::to_string(c) + "." + std::to_string(sc) + "." +
                      std::to_string(variant);
    auto it = fragments.find(key);
    if (it != fragments.end()) return it->second;
    std::uint64_t salt = 0x66726167ULL + 1000003ULL * c + 1009ULL * sc +
                         static_cast<std::uint64_t>(variant);
    Rng frag_rng(config.seed ^ salt);
    Molecule fragment = make_molecule(frag_rng, 4 + (c + sc + variant) % 4,
                                      /*hetero_rich=*/true);
    return fragments.emplace(key, std::move(fragment)).first->second;
  };

  // shared cofactor-like small molecules, class-independent
  std::vector<Molecule> cofactors;
  for (int i = 0; i < 24; ++i) {
    Rng cof_rng(config.seed ^ (0xc0fac70ULL + i));
    cofactors.push_back(make_molecule(cof_rng, 4 + i % 6));
  }

  struct Line {
    std::string substrates;
    std::string ec;
    std::string product;
  };
  std::vector<Line> lines;
  std::set<std::string> seen;  // canonical triples

  auto push_unique = [&](const Molecule &subs_main,
                         const Molecule *subs_extra, const std::string &ec,
                         const Molecule &product) -> bool {
    std::string subs = random_order_smiles(subs_main, rng);
    if (subs_extra) subs += "." + random_order_smiles(*subs_extra, rng);
    std::string prod = random_order_smiles(product, rng);
    std::string canon_prod = chem::canonicalize(prod);
    std::string canon_subs = chem::canonicalize(subs);
    if (canon_prod.find('.') != std::string::npos) return false;
    // the product must not appear among the substrate components
    std::string padded = "." + canon_subs + ".";
    if (padded.find("." + canon_prod + ".") != std::string::npos) {
      return false;
    }
    std::string triple = canon_subs + "|" + ec + ">>" + canon_prod;
    if (!seen.insert(triple).second) return false;
    lines.push_back({subs, ec, prod});
    return true;
  };

  const std::size_t target_main = config.n_unique - config.class7_records;
  while (lines.size() < target_main) {
    int c = taxonomy.sample_class(rng);
    int sc = 1 + static_cast<int>(rng.below(taxonomy.subclasses[c - 1]));
    int d3 = 1 + static_cast<int>(rng.below(4));
    int d4 = 1 + static_cast<int>(rng.below(25));
    std::string ec = std::to_string(c) + "." + std::to_string(sc) + "." +
                     std::to_string(d3) + "." + std::to_string(d4);

    Molecule base = make_molecule(rng, 6 + static_cast<int>(rng.below(7)));
    const Molecule *extra = nullptr;
    if (rng.unit() < config.cofactor_prob) {
      extra = &cofactors[rng.below(cofactors.size())];
    }

    auto build_product = [&]() {
      int effective_c = c;
      int effective_sc = sc;
      if (rng.unit() >= config.class_signal) {
        // label noise: motif from a random other class
        effective_c = taxonomy.sample_class(rng);
        effective_sc =
            1 + static_cast<int>(rng.below(taxonomy.subclasses[effective_c - 1]));
      }
      int variant = static_cast<int>(rng.below(config.fragment_variants));
      Molecule product =
          attach(base, fragment_for(effective_c, effective_sc, variant), rng);
      if (rng.unit() < config.signature_prob) {
        int sig_class = rng.unit() < config.signature_fidelity
                            ? c
                            : taxonomy.sample_class(rng);
        int sig_variant = static_cast<int>(
            rng.below(std::max(1, config.signature_variants)));
        product = attach(product, class_signature(sig_class, sig_variant),
                         rng);
      }
      if (rng.unit() < config.noise_fragment_prob) {
        Rng noise_rng(rng.next());
        Molecule decoration = make_molecule(noise_rng, 3);
        product = attach(product, decoration, rng);
      }
      return product;
    };

    Molecule product = build_product();
    if (!push_unique(base, extra, ec, product)) continue;

    if (rng.unit() < config.substrate_branch_prob) {
      int extra_products = 1 + static_cast<int>(rng.below(2));
      for (int k = 0; k < extra_products && lines.size() < target_main; ++k) {
        push_unique(base, extra, ec, build_product());
      }
    }
    if (rng.unit() < config.product_branch_prob && lines.size() < target_main) {
      // same product reached from an unrelated substrate set
      Molecule alt = make_molecule(rng, 6 + static_cast<int>(rng.below(11)));
      push_unique(alt, nullptr, ec, product);
    }
  }

  // class 7, kept below 20 records
  std::size_t guard = 0;
  while (lines.size() < config.n_unique && guard++ < 1000) {
    std::string ec = "7." + std::to_string(1 + rng.below(2)) + "." +
                     std::to_string(1 + rng.below(2)) + "." +
                     std::to_string(1 + rng.below(9));
    Molecule base = make_molecule(rng, 6 + static_cast<int>(rng.below(8)));
    Molecule product = attach(base, class_signature(7, 0), rng);
    push_unique(base, nullptr, ec, product);
  }

  // permuted duplicate lines exercising canonical dedup
  std::size_t n_dupes = static_cast<std::size_t>(
      config.duplicate_fraction * static_cast<double>(lines.size()));
  std::vector<Line> dupes;
  for (std::size_t i = 0; i < n_dupes; ++i) {
    const Line &source = lines[rng.below(lines.size())];
    Line dupe;
    // re-parse and re-write under a fresh random ordering
    Molecule subs = chem::parse_smiles(source.substrates);
    Molecule prod = chem::parse_smiles(source.product);
    dupe.substrates = random_order_smiles(subs, rng);
    dupe.ec = source.ec;
    dupe.product = random_order_smiles(prod, rng);
    dupes.push_back(std::move(dupe));
  }
  lines.insert(lines.end(), dupes.begin(), dupes.end());
  rng.shuffle(lines);

  std::string out;
  out += "# synthetic enzymatic reaction corpus (seed " +
         std::to_string(config.seed) + ")\n";
  out += "# format: SUBSTRATES|EC>>PRODUCT\n";
  for (const Line &line : lines) {
    out += line.substrates + "|" + line.ec + ">>" + line.product + "\n";
  }
  return out;
}

void write_synth_corpus(const SynthConfig &config, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus: " + path);
  out << synth_corpus_text(config);
}

}  // namespace enzybench::synth
