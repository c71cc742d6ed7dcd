#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "enzybench/util/error.hpp"

namespace enzybench::corpus {

// Four-level Enzyme Commission number "d1.d2.d3.d4"; d1 is the main class.
struct ECNumber {
  int d1 = 0;
  int d2 = 0;
  int d3 = 0;
  int d4 = 0;

  // Throws FormatError unless the text is exactly four dot-separated
  // positive integers with d1 in 1..7.
  static ECNumber parse(std::string_view text);

  std::string str() const;
  // "d1", "d1.d2", ... for depth 1..4.
  std::string truncated(int depth) const;
  int digit(int position) const;  // 1-based

  auto operator<=>(const ECNumber &) const = default;
};

}  // namespace enzybench::corpus
