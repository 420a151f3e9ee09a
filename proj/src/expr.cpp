// SPDX-License-Identifier: MIT
#include "qpspec/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "qpspec/errors.hpp"

namespace qpspec {
namespace {

/// Minimal recursive-descent evaluator for configuration constants.
class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  double parse() {
    double v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  double expr() {
    double v = term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        v += term();
      } else if (consume('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        v *= factor();
      } else if (consume('/')) {
        v /= factor();
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip_ws();
    if (consume('-')) return -factor();
    if (consume('(')) {
      double v = expr();
      expect(')');
      return v;
    }
    if (word("pi")) return std::numbers::pi;
    if (word("sqrt")) {
      skip_ws();
      expect('(');
      double v = expr();
      expect(')');
      if (v < 0.0) fail("sqrt of negative value");
      return std::sqrt(v);
    }
    return number();
  }

  double number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  /// Match an identifier keyword (not followed by another letter).
  bool word(const std::string& w) {
    if (text_.compare(pos_, w.size(), w) != 0) return false;
    std::size_t after = pos_ + w.size();
    if (after < text_.size() &&
        std::isalpha(static_cast<unsigned char>(text_[after]))) {
      return false;
    }
    pos_ = after;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw invalid_input("expression \"" + text_ + "\": " + what +
                        " at position " + std::to_string(pos_));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

double eval_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace qpspec
