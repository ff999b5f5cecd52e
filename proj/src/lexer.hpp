#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sesstk/error.hpp"
#include "sesstk/types.hpp"

namespace sesstk::detail {

struct Token {
  enum class Kind { Ident, Number, Sym, Arrow, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Tokenizer shared by the process and type parsers. Identifiers may contain
/// '%' so that generated names re-parse; "--" starts a comment.
class Lexer {
 public:
  explicit Lexer(std::string_view text);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is_sym(char c, std::size_t ahead = 0) const;
  bool is_ident(std::string_view word, std::size_t ahead = 0) const;
  bool accept_sym(char c);
  bool accept_ident(std::string_view word);
  void expect_sym(char c);
  void expect_ident(std::string_view word);
  std::string expect_name();
  unsigned expect_number();

  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Type parsers over a shared token stream, for annotations inside processes.
SessionType parse_st_from(Lexer& lx);
UsageType parse_ut_from(Lexer& lx);

}  // namespace sesstk::detail
