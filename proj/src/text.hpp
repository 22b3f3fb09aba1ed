#pragma once

// Line/token helpers shared by the puzzle parsers.

#include <string>
#include <string_view>
#include <vector>

#include "pzk/error.hpp"

namespace pzk::detail {

struct Line {
  std::size_t number;  // 1-based
  std::string text;
};

/// Non-blank lines with trailing whitespace and '\r' stripped.
inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string line(text.substr(pos, end - pos));
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (!line.empty()) out.push_back({number, std::move(line)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

struct Token {
  std::size_t column;  // 1-based
  std::string text;
};

inline std::vector<Token> tokens(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({start + 1, line.substr(start, i - start)});
  }
  return out;
}

inline long long parse_int(const Line& line, std::size_t column, const std::string& text) {
  if (text.empty()) throw ParseError(line.number, column, "expected an integer");
  long long value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw ParseError(line.number, column, "expected an integer, got '" + text + "'");
    value = value * 10 + (ch - '0');
    if (value > 1'000'000'000'000LL) throw ParseError(line.number, column, "integer too large");
  }
  return value;
}

}  // namespace pzk::detail
