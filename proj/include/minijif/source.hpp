#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace minijif {

/// 1-based line and column.
struct Position {
  int line = 1;
  int column = 1;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// Half-open source range: `end` is one past the last character.
struct Span {
  std::string file;
  Position start;
  Position end;

  bool contains(const Span& inner) const {
    return start <= inner.start && inner.end <= end;
  }
  std::string to_string() const {
    return file + ":" + std::to_string(start.line) + ":" + std::to_string(start.column);
  }
  friend bool operator==(const Span&, const Span&) = default;
};

inline Span cover(const Span& a, const Span& b) { return Span{a.file, a.start, b.end}; }

class LexError : public std::runtime_error {
 public:
  LexError(Span span, const std::string& what)
      : std::runtime_error(span.to_string() + ": " + what), span_(std::move(span)) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, std::vector<std::string> expected, const std::string& found)
      : std::runtime_error(format(span, expected, found)),
        span_(std::move(span)),
        expected_(std::move(expected)) {}
  ParseError(Span span, const std::string& what)
      : std::runtime_error(span.to_string() + ": " + what), span_(std::move(span)) {}

  const Span& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const Span& span, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string out = span.to_string() + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    return out + ", found " + found;
  }

  Span span_;
  std::vector<std::string> expected_;
};

}  // namespace minijif
