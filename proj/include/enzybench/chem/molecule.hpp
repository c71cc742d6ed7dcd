#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace enzybench::chem {

enum class BondOrder : std::uint8_t { Single, Double, Triple, Aromatic };

// Cis/trans marker on a bond, stored relative to the bond's (a -> b)
// direction as written. No geometric interpretation is attached.
enum class BondGeometry : std::uint8_t { Up, Down };

enum class Chirality : std::uint8_t { Clockwise, Counterclockwise };

struct Atom {
  std::string element;   // element symbol, e.g. "C", "Cl", "Fe"
  bool aromatic = false; // lowercase in SMILES
  int charge = 0;
  int hydrogens = 0;     // explicit (bracket) or inferred (organic subset)
  std::optional<int> isotope;
  std::optional<Chirality> chirality;
  // True when the atom was written bare (organic subset, H count implied).
  bool implicit_h = false;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
  std::optional<BondGeometry> geometry;  // oriented a -> b
};

// Attributed molecular graph. Possibly multi-component (dot-separated
// SMILES); components are the connected components of the bond graph.
struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int degree(int atom) const;
  // Bond order sum used by the valence model: aromatic bonds count one,
  // aromatic atoms get one extra increment.
  int bond_order_sum(int atom) const;
  std::vector<std::vector<int>> components() const;
  const Bond *find_bond(int a, int b) const;
};

bool organic_subset_element(const std::string &element);
bool known_element(const std::string &element);

// Smallest standard valence covering `order_sum`, or nullopt if none does.
std::optional<int> implied_hydrogens(const std::string &element,
                                     int order_sum);

}  // namespace enzybench::chem
