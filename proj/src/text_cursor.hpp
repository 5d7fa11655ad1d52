#pragma once

#include "geiringer/errors.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace geiringer::detail {

/// Whitespace-insensitive scanner over one line of text, reporting 1-based positions.
class TextCursor {
 public:
  TextCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool peek_is(std::string_view token) {
    skip_space();
    return text_.substr(pos_, token.size()) == token;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expect(std::string_view token) {
    if (!peek_is(token)) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing text");
  }

  template <class Pred>
  std::string word(Pred pred, std::string_view what) {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected " + std::string(what));
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t unsigned_integer(std::string_view what) {
    skip_space();
    const auto start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) fail(std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected " + std::string(what));
    return static_cast<std::uint32_t>(value);
  }

  std::size_t column() const noexcept { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column());
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace geiringer::detail
