#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "enzybench/chem/molecule.hpp"
#include "enzybench/util/error.hpp"

namespace enzybench::chem {

// Parses the SMILES subset used by ECREACT-style data: organic subset atoms,
// bracket atoms with isotope/chirality/H-count/charge, ring closures 0-9 and
// %nn, branches, dots, and the -, =, #, :, /, \ bond symbols. Implicit
// hydrogens are inferred from standard valences. Throws ParseError.
Molecule parse_smiles(std::string_view smiles);

// Emits SMILES visiting atoms in increasing `ranking` order (one rank per
// atom, lower rank written first). Total on valid molecules.
std::string write_smiles(const Molecule &molecule,
                         const std::vector<int> &ranking);

std::string write_smiles(const Molecule &molecule);

struct ValidityReport {
  bool valid = false;
  bool canonical = false;  // meaningful only when valid
  std::string failure_reason;
};

ValidityReport validate(std::string_view text);

}  // namespace enzybench::chem
