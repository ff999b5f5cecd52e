#include "lexer.hpp"

#include <cctype>

namespace sesstk::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '%' || c == '\'';
}

}  // namespace

Lexer::Lexer(std::string_view text) {
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
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
    Token tok;
    tok.line = line;
    tok.column = col;
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tok.kind = Token::Kind::Arrow;
      tok.text = "->";
      advance(2);
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::Number;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      static const std::string_view syms = "!?().,:#&{}|+*[]<>$;";
      if (syms.find(c) == std::string_view::npos)
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      tok.kind = Token::Kind::Sym;
      tok.text = std::string(1, c);
      advance(1);
    }
    tokens_.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  tokens_.push_back(end);
}

const Token& Lexer::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  if (idx >= tokens_.size()) return tokens_.back();
  return tokens_[idx];
}

Token Lexer::next() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Lexer::is_sym(char c, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Sym && t.text[0] == c;
}

bool Lexer::is_ident(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Ident && t.text == word;
}

bool Lexer::accept_sym(char c) {
  if (!is_sym(c)) return false;
  next();
  return true;
}

bool Lexer::accept_ident(std::string_view word) {
  if (!is_ident(word)) return false;
  next();
  return true;
}

void Lexer::expect_sym(char c) {
  if (!accept_sym(c)) fail(std::string("expected '") + c + "'");
}

void Lexer::expect_ident(std::string_view word) {
  if (!accept_ident(word)) fail("expected '" + std::string(word) + "'");
}

std::string Lexer::expect_name() {
  if (peek().kind != Token::Kind::Ident) fail("expected a name");
  return next().text;
}

unsigned Lexer::expect_number() {
  if (peek().kind != Token::Kind::Number) fail("expected a number");
  return static_cast<unsigned>(std::stoul(next().text));
}

void Lexer::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + ", found " + found, t.line, t.column);
}

}  // namespace sesstk::detail
