#pragma once

// Shared token scanner for the .sosm / .gcsl / .bltl text formats.
// Internal to the library; parsers keep their own keyword tables.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "sosmc/errors.hpp"

namespace sosmc::detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0;
  bool integral = false;
  int line = 0;
  int col = 0;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool isPunct(std::string_view t) const { return is(Tok::Punct, t); }
  bool isIdent(std::string_view t) const { return is(Tok::Ident, t); }
};

/// Tokenizes the whole input. "--" starts a comment until end of line.
/// Multi-char punctuation: -> := <= >= => (and every single symbol char).
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_')) {
        ++j;
      }
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool integral = true;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        integral = false;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E') && j + 1 < text.size() &&
          (std::isdigit(static_cast<unsigned char>(text[j + 1])) || text[j + 1] == '+' ||
           text[j + 1] == '-')) {
        integral = false;
        j += 2;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      t.number = std::stod(t.text);
      t.integral = integral;
      advance(j - i);
    } else {
      t.kind = Tok::Punct;
      std::string_view rest = text.substr(i);
      std::size_t len = 1;
      for (std::string_view p : {"->", ":=", "<=", ">=", "=>"}) {
        if (rest.substr(0, p.size()) == p) {
          len = p.size();
          break;
        }
      }
      t.text = std::string(rest.substr(0, len));
      advance(len);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

/// Token cursor with save/restore for the few places that backtrack.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool atEnd() const { return peek().kind == Tok::End; }

  bool tryPunct(std::string_view p) {
    if (peek().isPunct(p)) {
      next();
      return true;
    }
    return false;
  }
  bool tryIdent(std::string_view id) {
    if (peek().isIdent(id)) {
      next();
      return true;
    }
    return false;
  }

  void expectPunct(std::string_view p) {
    if (!tryPunct(p)) fail("expected '" + std::string(p) + "'");
  }
  void expectIdent(std::string_view id) {
    if (!tryIdent(id)) fail("expected '" + std::string(id) + "'");
  }
  std::string expectName(std::string_view what) {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what));
    return next().text;
  }
  double expectNumber(std::string_view what) {
    if (peek().kind != Tok::Number) fail("expected " + std::string(what));
    return next().number;
  }

  std::size_t save() const { return pos_; }
  void restore(std::size_t p) { pos_ = p; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", got " + got, t.line, t.col);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace sosmc::detail
