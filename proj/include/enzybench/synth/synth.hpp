#pragma once

#include <cstdint>
#include <string>

namespace enzybench::synth {

// Deterministic generator of a BRENDA-scale reaction corpus in the
// `SUBSTRATES|EC>>PRODUCT` line format. Reactions carry class-dependent
// structural motifs so that fingerprint models have real (but noisy)
// signal to learn, substrate/product branching so grouping and leakage
// machinery is exercised, and atom-permuted duplicate lines so canonical
// deduplication has work to do.
struct SynthConfig {
  std::uint64_t seed = 20240601;
  std::size_t n_unique = 8496;       // unique canonical triples
  double duplicate_fraction = 0.035; // extra permuted duplicate lines
  // class-level signature motif (rare elements, learnable from few samples)
  double signature_prob = 0.47;
  double signature_fidelity = 1.0;   // chance the signature is the true class
  int signature_variants = 6;        // family size per class
  // subclass motif variants: a large vocabulary whose partial train
  // coverage is what separates the low- and full-data regimes
  double class_signal = 1.0;         // chance the true subclass motif is used
  int fragment_variants = 44;        // motif variants per EC subclass
  double noise_fragment_prob = 0.08; // unrelated decoration on the product
  double cofactor_prob = 0.15;       // extra substrate component
  double substrate_branch_prob = 0.11;
  double product_branch_prob = 0.05;
  std::size_t class7_records = 15;   // kept < 20
};

std::string synth_corpus_text(const SynthConfig &config);

void write_synth_corpus(const SynthConfig &config, const std::string &path);

}  // namespace enzybench::synth
