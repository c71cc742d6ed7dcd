#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "enzybench/corpus/ec_number.hpp"

namespace enzybench::corpus {

// One enzymatic reaction after canonicalization; the unit of ingestion.
// `substrates` is the sorted dot-joined canonical component set, `product`
// a single canonical component, and `id` a stable content hash of the
// triple.
struct ReactionRecord {
  std::string id;
  std::string substrates;
  std::string product;
  ECNumber ec;
  bool class7 = false;  // retained in corpora, excluded from analyses

  std::string key() const { return substrates + "|" + ec.str() + ">>" + product; }
};

// Canonicalizes both sides and computes the id. Throws ParseError on bad
// SMILES and FormatError on a multi-component or substrate-duplicating
// product.
ReactionRecord make_record(std::string_view substrates,
                           std::string_view product, const ECNumber &ec);

struct IngestIssue {
  std::size_t line = 0;
  std::string message;
};

struct IngestReport {
  std::size_t lines_total = 0;
  std::size_t lines_parsed = 0;
  std::size_t duplicates_removed = 0;
  std::size_t skipped_by_source = 0;
  std::vector<IngestIssue> issues;  // per-line failures, never fatal
};

struct IngestOptions {
  // When set, CSV rows whose source column differs are skipped.
  std::optional<std::string> source_filter;
};

// Reads either the line format `SUBSTRATES|EC>>PRODUCT` (with `#` comments)
// or the 2-column CSV (`rxn_smiles`,`source`) with the EC embedded after
// `|`. Format is detected from the header line. Throws IoError only when
// the file cannot be opened.
std::vector<ReactionRecord> ingest_file(const std::string &path,
                                        IngestReport &report,
                                        const IngestOptions &options = {});

std::vector<ReactionRecord> ingest_stream(std::istream &input,
                                          IngestReport &report,
                                          const IngestOptions &options = {});

}  // namespace enzybench::corpus
