#pragma once

#include <cstdint>
#include <vector>

#include "enzybench/chem/molecule.hpp"
#include "enzybench/util/error.hpp"

namespace enzybench::chem {

class BitFingerprint {
 public:
  BitFingerprint() = default;
  explicit BitFingerprint(int length);

  int length() const { return length_; }
  int popcount() const;
  bool test(int bit) const;
  void set(int bit);

  const std::vector<std::uint64_t> &blocks() const { return blocks_; }

  BitFingerprint operator&(const BitFingerprint &other) const;
  BitFingerprint operator|(const BitFingerprint &other) const;
  BitFingerprint operator^(const BitFingerprint &other) const;
  bool operator==(const BitFingerprint &other) const = default;

 private:
  int length_ = 0;
  std::vector<std::uint64_t> blocks_;
};

// Daylight-style path fingerprint: all linear atom-bond paths of 0..max_path
// bonds, each path read in its lexicographically smaller direction, hashed
// with 64-bit FNV-1a and folded modulo n_bits.
BitFingerprint path_fingerprint(const Molecule &molecule, int n_bits = 2048,
                                int max_path = 7);

// Morgan/ECFP-style circular fingerprint with iterative neighborhood
// hashing up to `radius`, identifiers folded modulo n_bits.
BitFingerprint circular_fingerprint(const Molecule &molecule,
                                    int n_bits = 256, int radius = 2);

// |a AND b| / |a OR b|; 1.0 when both fingerprints are all-zero.
// Throws LengthMismatch when the widths differ.
double tanimoto(const BitFingerprint &a, const BitFingerprint &b);

}  // namespace enzybench::chem
