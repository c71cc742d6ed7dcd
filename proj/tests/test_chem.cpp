#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "enzybench/chem/canonical.hpp"
#include "enzybench/chem/fingerprint.hpp"
#include "enzybench/chem/smiles.hpp"
#include "support/molgen.hpp"

using namespace enzybench;
using namespace enzybench::chem;

TEST_CASE("parse ethanol") {
  Molecule m = parse_smiles("CCO");
  REQUIRE(m.atoms.size() == 3);
  REQUIRE(m.bonds.size() == 2);
  CHECK(m.atoms[0].element == "C");
  CHECK(m.atoms[2].element == "O");
  int total_h = 0;
  for (const Atom &a : m.atoms) total_h += a.hydrogens;
  CHECK(total_h == 6);
  CHECK(m.find_bond(0, 1) != nullptr);
  CHECK(m.find_bond(1, 2) != nullptr);
  CHECK(m.find_bond(0, 2) == nullptr);
}

TEST_CASE("parse errors carry position and reason") {
  CHECK_THROWS_WITH_AS(parse_smiles("C1CC"),
                       "SMILES parse error at position 1: unclosed ring bond 1",
                       ParseError);
  CHECK_THROWS_AS(parse_smiles(""), ParseError);
  CHECK_THROWS_AS(parse_smiles("C(C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("CC)"), ParseError);
  CHECK_THROWS_AS(parse_smiles("CXq"), ParseError);
  CHECK_THROWS_AS(parse_smiles("[Zz]"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C="), ParseError);
  CHECK_THROWS_AS(parse_smiles("=C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C=(C)C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("[CH"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C%1C"), ParseError);
  // valence violations
  CHECK_THROWS_AS(parse_smiles("C(C)(C)(C)(C)C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("O=O=O"), ParseError);
}

TEST_CASE("ring closure bookkeeping") {
  Molecule m = parse_smiles("C1CCCCC1");
  CHECK(m.atoms.size() == 6);
  CHECK(m.bonds.size() == 6);
  // digit reuse after closing: two fused triangles, 6 atoms, 7 bonds
  Molecule reuse = parse_smiles("C1CC1C1CC1");
  CHECK(reuse.atoms.size() == 6);
  CHECK(reuse.bonds.size() == 7);
  // %nn closures
  Molecule percent = parse_smiles("C%10CCCC%10");
  CHECK(percent.bonds.size() == 5);
  // self-loop and duplicate bonds rejected
  CHECK_THROWS_AS(parse_smiles("C11"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C12CC12"), ParseError);
  // ring bond order annotated at either or both ends, conflicts rejected
  CHECK_THROWS_AS(parse_smiles("C=1CCCCC#1"), ParseError);
  CHECK(parse_smiles("C=1CCCCC=1").find_bond(0, 5)->order ==
        BondOrder::Double);
  CHECK(parse_smiles("C=1CCCCC1").find_bond(0, 5)->order ==
        BondOrder::Double);
  CHECK(parse_smiles("C1CCCCC=1").find_bond(0, 5)->order ==
        BondOrder::Double);
}

TEST_CASE("benzene parses to an aromatic ring") {
  Molecule m = parse_smiles("c1ccccc1");
  REQUIRE(m.atoms.size() == 6);
  REQUIRE(m.bonds.size() == 6);
  for (const Atom &a : m.atoms) {
    CHECK(a.element == "C");
    CHECK(a.aromatic);
    CHECK(a.hydrogens == 1);
  }
  for (const Bond &b : m.bonds) CHECK(b.order == BondOrder::Aromatic);
  for (int i = 0; i < 6; ++i) CHECK(m.degree(i) == 2);
}

TEST_CASE("aromatic bond endpoints must be aromatic") {
  CHECK_THROWS_AS(parse_smiles("C:C"), ParseError);
  // explicit single bond between aromatic rings is legal
  Molecule biphenyl = parse_smiles("c1ccccc1-c1ccccc1");
  CHECK(biphenyl.atoms.size() == 12);
  int aromatic_bonds = 0;
  int single_bonds = 0;
  for (const Bond &b : biphenyl.bonds) {
    if (b.order == BondOrder::Aromatic) ++aromatic_bonds;
    if (b.order == BondOrder::Single) ++single_bonds;
  }
  CHECK(aromatic_bonds == 12);
  CHECK(single_bonds == 1);
}

TEST_CASE("bracket atoms: isotope, charge, hydrogens, chirality, maps") {
  Molecule m = parse_smiles("[13CH3-]");
  REQUIRE(m.atoms.size() == 1);
  CHECK(m.atoms[0].isotope == 13);
  CHECK(m.atoms[0].hydrogens == 3);
  CHECK(m.atoms[0].charge == -1);
  CHECK(parse_smiles("[Fe+2]").atoms[0].charge == 2);
  CHECK(parse_smiles("[Fe++]").atoms[0].charge == 2);
  CHECK(parse_smiles("[O-]").atoms[0].charge == -1);
  CHECK(parse_smiles("[NH4+]").atoms[0].hydrogens == 4);
  CHECK(parse_smiles("[C@H](N)(O)C").atoms[0].chirality ==
        Chirality::Counterclockwise);
  CHECK(parse_smiles("[C@@H](N)(O)C").atoms[0].chirality ==
        Chirality::Clockwise);
  // atom maps accepted and dropped
  Molecule mapped = parse_smiles("[CH3:5][OH:2]");
  CHECK(mapped.atoms.size() == 2);
  // bracket atoms carry explicit hydrogen counts only
  CHECK(parse_smiles("[C]").atoms[0].hydrogens == 0);
}

TEST_CASE("dot separates components") {
  Molecule m = parse_smiles("CCO.[Na+].O");
  CHECK(m.components().size() == 3);
  CHECK(m.atoms.size() == 5);
}

TEST_CASE("write single atom and orderings") {
  Molecule carbon = parse_smiles("C");
  CHECK(write_smiles(carbon) == "C");
  Molecule ethanol = parse_smiles("CCO");
  CHECK(write_smiles(ethanol, {2, 1, 0}) == "OCC");
  CHECK(write_smiles(ethanol, {0, 1, 2}) == "CCO");
}

TEST_CASE("canonicalize merges representations") {
  CHECK(canonicalize("OCC") == canonicalize("CCO"));
  CHECK(canonicalize("C(O)C") == canonicalize("CCO"));
  CHECK(canonicalize("OC(C)=O") == canonicalize("CC(=O)O"));
}

TEST_CASE("canonicalization is idempotent") {
  for (const char *s :
       {"CCO", "c1ccccc1", "CC(=O)O", "N[C@H](C)C(=O)O", "F/C=C/F",
        "CCO.[Na+]", "C1CC1.C1CC1", "[13C]", "O=P(O)(O)OCC"}) {
    std::string once = canonicalize(s);
    CHECK(canonicalize(once) == once);
  }
}

TEST_CASE("all permutations of a small molecule canonicalize identically") {
  // brute force over all 4! atom orderings
  Molecule m = parse_smiles("C(O)(N)C");
  REQUIRE(m.atoms.size() == 4);
  std::vector<int> perm{0, 1, 2, 3};
  std::set<std::string> canonical_forms;
  do {
    std::string written = write_smiles(m, perm);
    canonical_forms.insert(canonicalize(written));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(canonical_forms.size() == 1);
}

TEST_CASE("multi-component canonical form sorts components") {
  std::string a = canonicalize("CCO.C");
  std::string b = canonicalize("C.OCC");
  CHECK(a == b);
  REQUIRE(a.find('.') != std::string::npos);
  auto dot = a.find('.');
  CHECK(a.substr(0, dot) <= a.substr(dot + 1));
}

TEST_CASE("round-trip isomorphism over random molecules") {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    Molecule m =
        molgen::random_molecule(rng, 2 + static_cast<int>(rng.below(12)));
    std::string reference = canonical_smiles(m);
    std::string written = molgen::random_smiles(m, rng);
    CAPTURE(written);
    CHECK(canonicalize(written) == reference);
  }
}

TEST_CASE("stereo markers survive round trips") {
  std::string chiral = canonicalize("N[C@H](C)C(=O)O");
  CHECK(chiral.find('@') != std::string::npos);
  std::string geom = canonicalize("F/C=C/F");
  CHECK((geom.find('/') != std::string::npos ||
         geom.find('\\') != std::string::npos));
  CHECK(canonicalize("F/C=C/F") == canonicalize("F\\C=C\\F"));
}

TEST_CASE("path fingerprint basics") {
  BitFingerprint lone = path_fingerprint(parse_smiles("C"));
  CHECK(lone.length() == 2048);
  CHECK(lone.popcount() == 1);

  BitFingerprint a1 = path_fingerprint(parse_smiles("CCO"));
  BitFingerprint a2 = path_fingerprint(parse_smiles("OCC"));
  CHECK(a1 == a2);

  // CCO and CCN share the C / C-C paths but differ on the heteroatom end
  BitFingerprint b = path_fingerprint(parse_smiles("CCN"));
  CHECK(a1.popcount() > 0);
  CHECK((a1 ^ b).popcount() >= 1);
}

TEST_CASE("path fingerprint monotone containment") {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    Molecule m = molgen::random_molecule(
        rng, 3 + static_cast<int>(rng.below(8)), /*decorations=*/false);
    BitFingerprint before = path_fingerprint(m);
    Molecule extended = m;
    int anchor = -1;
    for (std::size_t a = 0; a < m.atoms.size(); ++a) {
      if (implied_hydrogens(m.atoms[a].element,
                            m.bond_order_sum(static_cast<int>(a)))
              .value_or(0) > 0) {
        anchor = static_cast<int>(a);
        break;
      }
    }
    if (anchor < 0) continue;
    Atom carbon;
    carbon.element = "C";
    extended.atoms.push_back(carbon);
    extended.bonds.push_back(
        Bond{anchor, static_cast<int>(extended.atoms.size()) - 1,
             BondOrder::Single,
             {}});
    BitFingerprint after = path_fingerprint(extended);
    CHECK((before & after) == before);  // no original bit unset
  }
}

TEST_CASE("circular fingerprint basics") {
  BitFingerprint fp = circular_fingerprint(parse_smiles("CCO"));
  CHECK(fp.length() == 256);
  CHECK(circular_fingerprint(parse_smiles("C")).popcount() == 1);
  CHECK(circular_fingerprint(parse_smiles("C"), 1024, 2).length() == 1024);
}

TEST_CASE("fingerprints are functions of the graph, not the atom order") {
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    Molecule m =
        molgen::random_molecule(rng, 2 + static_cast<int>(rng.below(10)));
    Molecule permuted = parse_smiles(molgen::random_smiles(m, rng));
    CHECK(path_fingerprint(m) == path_fingerprint(permuted));
    CHECK(circular_fingerprint(m) == circular_fingerprint(permuted));
  }
}

TEST_CASE("tanimoto arithmetic") {
  BitFingerprint a(64), b(64);
  a.set(1);
  a.set(2);
  b.set(1);
  b.set(3);
  CHECK(tanimoto(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(tanimoto(a, a) == 1.0);
  BitFingerprint disjoint(64);
  disjoint.set(9);
  BitFingerprint other(64);
  other.set(10);
  CHECK(tanimoto(disjoint, other) == 0.0);
  BitFingerprint zero(64), zero2(64);
  CHECK(tanimoto(zero, zero2) == 1.0);  // both all-zero by definition
  BitFingerprint wide(128);
  CHECK_THROWS_AS(tanimoto(a, wide), LengthMismatch);
}

TEST_CASE("tanimoto symmetry over random fingerprints") {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    BitFingerprint a(256), b(256);
    for (int k = 0; k < 30; ++k) {
      a.set(static_cast<int>(rng.below(256)));
      b.set(static_cast<int>(rng.below(256)));
    }
    double ab = tanimoto(a, b);
    CHECK(ab == tanimoto(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("validate reports") {
  ValidityReport ok = validate(canonicalize("CCO"));
  CHECK(ok.valid);
  CHECK(ok.canonical);
  ValidityReport non_canonical = validate("C(O)C");
  CHECK(non_canonical.valid);
  if (canonicalize("C(O)C") != "C(O)C") {
    CHECK_FALSE(non_canonical.canonical);
  }
  ValidityReport bad = validate("C1CC");
  CHECK_FALSE(bad.valid);
  CHECK(bad.failure_reason.find("unclosed ring") != std::string::npos);
  CHECK_FALSE(validate("").valid);
}
