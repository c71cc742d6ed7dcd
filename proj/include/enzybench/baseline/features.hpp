#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "enzybench/chem/fingerprint.hpp"
#include "enzybench/corpus/reaction.hpp"

namespace enzybench::baseline {

using FeatureMatrix = Eigen::MatrixXf;  // rows = samples, cols = features
using TargetMatrix = Eigen::MatrixXf;

// Difference fingerprint of the whole reaction: OR over substrate circular
// fingerprints XOR the product fingerprint. Invariant to substrate order
// and atom order.
chem::BitFingerprint reaction_fingerprint(const corpus::ReactionRecord &record,
                                          int n_bits = 1024, int radius = 2);

Eigen::VectorXf fingerprint_to_features(const chem::BitFingerprint &fp);

// Hierarchical EC featurization: each digit label-encoded against a
// vocabulary fitted on the FULL EC set, z-scored with train-only statistics
// and multiplied by a scale factor (0 collapses every encoding, the
// remove-EC ablation).
class ECEncoder {
 public:
  static ECEncoder fit(const std::vector<corpus::ECNumber> &vocabulary,
                       const std::vector<corpus::ECNumber> &train,
                       double scale);

  std::array<double, 4> encode(const corpus::ECNumber &ec) const;
  corpus::ECNumber decode(const std::array<double, 4> &values) const;
  double scale() const { return scale_; }

 private:
  std::array<std::vector<int>, 4> labels_;  // sorted unique digit values
  std::array<double, 4> mean_{};
  std::array<double, 4> stddev_{};
  double scale_ = 1.0;
};

}  // namespace enzybench::baseline
