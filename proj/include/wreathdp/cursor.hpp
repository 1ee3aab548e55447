#pragma once

#include "wreathdp/errors.hpp"
#include "wreathdp/integer.hpp"

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace wreathdp {

/// Character cursor shared by all the text grammars. Tracks line and column
/// so every parser reports positions the same way. Whitespace between tokens
/// is insignificant everywhere.
class Cursor {
 public:
  explicit Cursor(std::string_view text, std::size_t first_line = 1)
      : text_(text), line_(first_line) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  /// Next significant character, or '\0' at end of input.
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  /// Character directly at the cursor, no whitespace skipping.
  char raw_peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char take() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    advance();
    return c;
  }

  bool accept(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  bool accept(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) == word) {
      for (std::size_t i = 0; i < word.size(); ++i) advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      char got = peek();
      fail(std::string("expected '") + c + "' but found " +
           (got == '\0' ? std::string("end of input")
                        : std::string("'") + got + "'"));
    }
  }

  void expect(std::string_view word) {
    if (!accept(word)) fail("expected '" + std::string(word) + "'");
  }

  /// Optionally signed decimal integer.
  Integer integer() {
    skip_ws();
    std::string digits;
    if (raw_peek() == '-' || raw_peek() == '+') {
      if (raw_peek() == '-') digits.push_back('-');
      advance();
      skip_ws();
    }
    if (!std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      fail("expected an integer");
    }
    while (std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      digits.push_back(raw_peek());
      advance();
    }
    return Integer(digits);
  }

  std::int64_t small_integer() {
    std::size_t line = line_, col = column_;
    Integer v = integer();
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
      throw ParseError(line, col, "integer out of range");
    }
    return static_cast<std::int64_t>(v);
  }

  /// Unsigned decimal digits immediately at the cursor (no whitespace).
  std::size_t index_digits() {
    if (!std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      fail("expected an index");
    }
    std::size_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(raw_peek()))) {
      v = v * 10 + static_cast<std::size_t>(raw_peek() - '0');
      if (v > 1'000'000) fail("index too large");
      advance();
    }
    return v;
  }

  /// Identifier `[A-Za-z_][A-Za-z0-9_]*`, or empty if none at the cursor.
  std::string identifier() {
    skip_ws();
    std::string id;
    if (!(std::isalpha(static_cast<unsigned char>(raw_peek())) ||
          raw_peek() == '_')) {
      return id;
    }
    while (std::isalnum(static_cast<unsigned char>(raw_peek())) ||
           raw_peek() == '_') {
      id.push_back(raw_peek());
      advance();
    }
    return id;
  }

  void expect_end() {
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, column_, what);
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_ = 1;
};

}  // namespace wreathdp
