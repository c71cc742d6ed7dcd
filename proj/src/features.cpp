#include "enzybench/baseline/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "enzybench/chem/smiles.hpp"
#include "enzybench/util/error.hpp"

namespace enzybench::baseline {

chem::BitFingerprint reaction_fingerprint(const corpus::ReactionRecord &record,
                                          int n_bits, int radius) {
  // a multi-component fingerprint equals the OR over per-component bits
  chem::BitFingerprint substrates = chem::circular_fingerprint(
      chem::parse_smiles(record.substrates), n_bits, radius);
  chem::BitFingerprint product = chem::circular_fingerprint(
      chem::parse_smiles(record.product), n_bits, radius);
  return substrates ^ product;
}

Eigen::VectorXf fingerprint_to_features(const chem::BitFingerprint &fp) {
  Eigen::VectorXf out(fp.length());
  for (int i = 0; i < fp.length(); ++i) out[i] = fp.test(i) ? 1.0f : 0.0f;
  return out;
}

ECEncoder ECEncoder::fit(const std::vector<corpus::ECNumber> &vocabulary,
                         const std::vector<corpus::ECNumber> &train,
                         double scale) {
  ECEncoder encoder;
  encoder.scale_ = scale;
  for (int position = 1; position <= 4; ++position) {
    std::set<int> values;
    for (const corpus::ECNumber &ec : vocabulary) {
      values.insert(ec.digit(position));
    }
    auto &labels = encoder.labels_[position - 1];
    labels.assign(values.begin(), values.end());
    double sum = 0.0;
    double sumsq = 0.0;
    for (const corpus::ECNumber &ec : train) {
      auto it = std::lower_bound(labels.begin(), labels.end(),
                                 ec.digit(position));
      if (it == labels.end() || *it != ec.digit(position)) {
        throw UnknownDigit("train EC digit missing from vocabulary: " +
                           ec.str());
      }
      double label = static_cast<double>(it - labels.begin());
      sum += label;
      sumsq += label * label;
    }
    const double n = static_cast<double>(train.size());
    double mean = n == 0.0 ? 0.0 : sum / n;
    double var = n == 0.0 ? 0.0 : sumsq / n - mean * mean;
    encoder.mean_[position - 1] = mean;
    encoder.stddev_[position - 1] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return encoder;
}

std::array<double, 4> ECEncoder::encode(const corpus::ECNumber &ec) const {
  std::array<double, 4> out{};
  for (int position = 1; position <= 4; ++position) {
    const auto &labels = labels_[position - 1];
    auto it = std::lower_bound(labels.begin(), labels.end(),
                               ec.digit(position));
    if (it == labels.end() || *it != ec.digit(position)) {
      throw UnknownDigit("EC digit outside fitted vocabulary: " + ec.str());
    }
    double label = static_cast<double>(it - labels.begin());
    out[position - 1] = (label - mean_[position - 1]) /
                        stddev_[position - 1] * scale_;
  }
  return out;
}

corpus::ECNumber ECEncoder::decode(const std::array<double, 4> &values) const {
  std::array<int, 4> digits{};
  for (int position = 1; position <= 4; ++position) {
    const auto &labels = labels_[position - 1];
    double z = scale_ > 0.0 ? values[position - 1] / scale_ : 0.0;
    double label = z * stddev_[position - 1] + mean_[position - 1];
    // nearest label index, halfway ties toward the smaller value
    long long index = static_cast<long long>(std::ceil(label - 0.5));
    index = std::clamp<long long>(index, 0,
                                  static_cast<long long>(labels.size()) - 1);
    digits[position - 1] = labels[static_cast<std::size_t>(index)];
  }
  corpus::ECNumber ec;
  ec.d1 = digits[0];
  ec.d2 = digits[1];
  ec.d3 = digits[2];
  ec.d4 = digits[3];
  return ec;
}

}  // namespace enzybench::baseline
