#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "enzybench/chem/molecule.hpp"

namespace enzybench::chem {

// Canonical atom ranks for one connected molecule (or any molecule; ranks
// are computed per component and offset so they are globally unique).
// Iterative invariant refinement seeded by (element, degree, charge,
// H-count, aromaticity, isotope); remaining ties are resolved by exploring
// every promotion within the lowest tied class and keeping the ordering
// whose written SMILES is lexicographically smallest, which keeps the
// result independent of input atom order even on refinement-degenerate
// graphs.
std::vector<int> canonical_ranks(const Molecule &molecule);

// Canonical form: components canonicalized independently, sorted, and
// re-joined with '.'. Idempotent. Propagates ParseError.
std::string canonicalize(std::string_view smiles);

std::string canonical_smiles(const Molecule &molecule);

}  // namespace enzybench::chem
