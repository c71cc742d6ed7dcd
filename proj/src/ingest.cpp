#include "enzybench/corpus/reaction.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "enzybench/chem/canonical.hpp"
#include "enzybench/util/hash.hpp"

namespace enzybench::corpus {

namespace {

std::string trim(std::string_view s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Canonicalize a dot-separated substrate set: components independently
// canonical, sorted, re-joined.
std::string canonical_substrates(std::string_view text) {
  return chem::canonicalize(text);
}

struct ParsedLine {
  std::string substrates;
  std::string ec;
  std::string product;
};

// `SUBSTRATES|EC>>PRODUCT`
ParsedLine parse_reaction_text(const std::string &line) {
  std::size_t bar = line.find('|');
  if (bar == std::string::npos) {
    throw FormatError("missing '|' EC separator");
  }
  std::size_t arrow = line.find(">>", bar);
  if (arrow == std::string::npos) {
    throw FormatError("missing '>>' reaction arrow");
  }
  ParsedLine parsed;
  parsed.substrates = trim(line.substr(0, bar));
  parsed.ec = trim(line.substr(bar + 1, arrow - bar - 1));
  parsed.product = trim(line.substr(arrow + 2));
  if (parsed.substrates.empty()) throw FormatError("empty substrate side");
  if (parsed.product.empty()) throw FormatError("empty product side");
  return parsed;
}

}  // namespace

ReactionRecord make_record(std::string_view substrates,
                           std::string_view product, const ECNumber &ec) {
  ReactionRecord record;
  record.substrates = canonical_substrates(substrates);
  record.product = chem::canonicalize(product);
  if (record.product.find('.') != std::string::npos) {
    throw FormatError("multi-component product");
  }
  auto components = split_on(record.substrates, '.');
  if (std::find(components.begin(), components.end(), record.product) !=
      components.end()) {
    throw FormatError("product also occurs among substrates");
  }
  record.ec = ec;
  record.class7 = ec.d1 == 7;
  record.id = hex64(fnv1a(record.key()));
  return record;
}

std::vector<ReactionRecord> ingest_stream(std::istream &input,
                                          IngestReport &report,
                                          const IngestOptions &options) {
  std::vector<ReactionRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;

  bool csv = false;
  int rxn_column = -1;
  int source_column = -1;

  auto handle_reaction = [&](const ParsedLine &parsed) {
    ECNumber ec = ECNumber::parse(parsed.ec);
    ReactionRecord record = make_record(parsed.substrates, parsed.product, ec);
    if (!seen.insert(record.key()).second) {
      ++report.duplicates_removed;
      return;
    }
    ++report.lines_parsed;
    records.push_back(std::move(record));
  };

  bool first_content_line = true;
  while (std::getline(input, line)) {
    ++line_number;
    ++report.lines_total;
    std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;

    if (first_content_line) {
      first_content_line = false;
      // ECREACT distribution files start with a header naming rxn_smiles.
      if (content.find("rxn_smiles") != std::string::npos) {
        csv = true;
        auto headers = split_on(content, ',');
        for (std::size_t i = 0; i < headers.size(); ++i) {
          std::string h = trim(headers[i]);
          if (h == "rxn_smiles") rxn_column = static_cast<int>(i);
          if (h == "source") source_column = static_cast<int>(i);
        }
        if (rxn_column < 0) {
          report.issues.push_back({line_number, "csv header lacks rxn_smiles"});
        }
        continue;
      }
    }

    try {
      std::string reaction = content;
      if (csv) {
        auto fields = split_on(content, ',');
        if (rxn_column < 0 ||
            static_cast<std::size_t>(rxn_column) >= fields.size()) {
          throw FormatError("csv row lacks rxn_smiles column");
        }
        if (options.source_filter && source_column >= 0) {
          if (static_cast<std::size_t>(source_column) >= fields.size() ||
              trim(fields[source_column]) != *options.source_filter) {
            ++report.skipped_by_source;
            continue;
          }
        }
        reaction = trim(fields[rxn_column]);
      }
      handle_reaction(parse_reaction_text(reaction));
    } catch (const Error &err) {
      report.issues.push_back({line_number, err.what()});
    }
  }
  return records;
}

std::vector<ReactionRecord> ingest_file(const std::string &path,
                                        IngestReport &report,
                                        const IngestOptions &options) {
  std::ifstream input(path);
  if (!input) throw IoError("cannot open input file: " + path);
  return ingest_stream(input, report, options);
}

}  // namespace enzybench::corpus
