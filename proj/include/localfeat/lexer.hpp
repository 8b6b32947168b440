#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "localfeat/error.hpp"

namespace localfeat {

enum class TokenKind {
  identifier,
  keyword,
  number,
  lparen,
  rparen,
  lbracket,
  rbracket,
  lbrace,
  rbrace,
  comma,
  semicolon,
  dot,
  dotdot,
  star,
  end,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  Span span;
};

enum class Dialect {
  product,  // .gis product specifications
  spl,      // .spl product-line definitions; identifiers may contain '-'
};

/// Keywords are case-sensitive, upper case, and dialect specific. Any other
/// word is an identifier.
bool is_keyword(Dialect dialect, std::string_view word);

/// Splits `source` into tokens, skipping whitespace and `//` comments. The
/// last token is always `end`. Throws ParseError(SyntaxError) on a character
/// that cannot start a token.
std::vector<Token> tokenize(std::string_view source, Dialect dialect);

/// Shared cursor over a token vector for the recursive-descent parsers.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& advance();
  bool at_end() const { return peek().kind == TokenKind::end; }

  bool check(TokenKind kind) const { return peek().kind == kind; }
  bool check_keyword(std::string_view word, std::size_t ahead = 0) const;
  bool accept(TokenKind kind);
  bool accept_keyword(std::string_view word);

  const Token& expect(TokenKind kind);
  const Token& expect_keyword(std::string_view word);
  const Token& expect_identifier(std::string_view what = "identifier");

  [[noreturn]] void fail(std::vector<std::string> expected) const;
  [[noreturn]] void fail_at(const Token& token, std::vector<std::string> expected) const;

  /// Span running from `first` to the previously consumed token.
  Span span_from(const Token& first) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& token);

}  // namespace localfeat
