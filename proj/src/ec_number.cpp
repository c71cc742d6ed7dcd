#include "enzybench/corpus/ec_number.hpp"

#include <charconv>
#include <vector>

namespace enzybench::corpus {

namespace {

int parse_digit(std::string_view field, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value <= 0) {
    throw FormatError("malformed EC number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

ECNumber ECNumber::parse(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string_view::npos) {
      fields.push_back(text.substr(start));
      break;
    }
    fields.push_back(text.substr(start, dot - start));
    start = dot + 1;
  }
  if (fields.size() != 4) {
    throw FormatError("EC number '" + std::string(text) +
                      "' must have four digits");
  }
  ECNumber ec;
  ec.d1 = parse_digit(fields[0], text);
  ec.d2 = parse_digit(fields[1], text);
  ec.d3 = parse_digit(fields[2], text);
  ec.d4 = parse_digit(fields[3], text);
  if (ec.d1 > 7) {
    throw FormatError("EC class " + std::to_string(ec.d1) + " out of range");
  }
  return ec;
}

std::string ECNumber::str() const { return truncated(4); }

std::string ECNumber::truncated(int depth) const {
  std::string out = std::to_string(d1);
  if (depth >= 2) out += "." + std::to_string(d2);
  if (depth >= 3) out += "." + std::to_string(d3);
  if (depth >= 4) out += "." + std::to_string(d4);
  return out;
}

int ECNumber::digit(int position) const {
  switch (position) {
    case 1: return d1;
    case 2: return d2;
    case 3: return d3;
    default: return d4;
  }
}

}  // namespace enzybench::corpus
