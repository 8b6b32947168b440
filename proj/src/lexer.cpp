#include "localfeat/lexer.hpp"

#include <algorithm>
#include <array>

namespace localfeat {

namespace {

constexpr std::array product_keywords{
    "AS",           "BIDIRECTIONAL", "CENTER",        "CREATE",   "DEFAULT",
    "DEFAULT_BASE_LAYER",            "DISPLAY_STRING", "ENTITY",  "FEATURES",
    "FOR",          "GEOJSON",       "GIS",           "IDENTIFIER", "IS_BASE_LAYER",
    "LAYER",        "LAYERS",        "MAP",           "MAPPED_BY", "RELATIONSHIP",
    "REQUIRED",     "STYLES",        "WITH",
};

constexpr std::array spl_keywords{
    "ABSTRACT", "APPLIED",  "DEFAULTS", "EXCLUDES", "FEATUREMODEL", "LOCAL",
    "MANDATORY", "OPTIONAL", "OR",      "REQUIRES", "TO",           "VIEWPOINT", "XOR",
};

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::number: return "number";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::comma: return "','";
    case TokenKind::semicolon: return "';'";
    case TokenKind::dot: return "'.'";
    case TokenKind::dotdot: return "'..'";
    case TokenKind::star: return "'*'";
    case TokenKind::end: return "end of input";
  }
  return "?";
}

bool is_keyword(Dialect dialect, std::string_view word) {
  auto has = [&](const auto& table) {
    return std::find(table.begin(), table.end(), word) != table.end();
  };
  return dialect == Dialect::product ? has(product_keywords) : has(spl_keywords);
}

std::vector<Token> tokenize(std::string_view source, Dialect dialect) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  auto here = [&](std::size_t at) { return Span{at, 0, line, at - line_start + 1}; };
  auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
    Span s = here(start);
    s.length = end - start;
    out.push_back({kind, std::string(source.substr(start, end - start)), s});
  };

  while (i < source.size()) {
    const char c = source[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_alpha(c)) {
      while (i < source.size()) {
        if (is_word(source[i])) {
          ++i;
        } else if (dialect == Dialect::spl && source[i] == '-' && i + 1 < source.size() &&
                   is_word(source[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
      auto word = source.substr(start, i - start);
      push(is_keyword(dialect, word) ? TokenKind::keyword : TokenKind::identifier, start, i);
      continue;
    }
    if (is_digit(c) || (c == '-' && i + 1 < source.size() && is_digit(source[i + 1]))) {
      ++i;
      while (i < source.size() && is_digit(source[i])) ++i;
      if (i + 1 < source.size() && source[i] == '.' && is_digit(source[i + 1])) {
        ++i;
        while (i < source.size() && is_digit(source[i])) ++i;
      }
      push(TokenKind::number, start, i);
      continue;
    }
    TokenKind kind;
    std::size_t width = 1;
    switch (c) {
      case '(': kind = TokenKind::lparen; break;
      case ')': kind = TokenKind::rparen; break;
      case '[': kind = TokenKind::lbracket; break;
      case ']': kind = TokenKind::rbracket; break;
      case '{': kind = TokenKind::lbrace; break;
      case '}': kind = TokenKind::rbrace; break;
      case ',': kind = TokenKind::comma; break;
      case ';': kind = TokenKind::semicolon; break;
      case '*': kind = TokenKind::star; break;
      case '.':
        if (i + 1 < source.size() && source[i + 1] == '.') {
          kind = TokenKind::dotdot;
          width = 2;
        } else {
          kind = TokenKind::dot;
        }
        break;
      default: {
        const auto byte = static_cast<unsigned char>(c);
        std::string shown = (byte >= 0x20 && byte < 0x7f) ? std::string(1, c) : "\\x" + [&] {
          constexpr char hex[] = "0123456789abcdef";
          return std::string{hex[byte >> 4], hex[byte & 0xf]};
        }();
        Span s = here(start);
        s.length = 1;
        throw ParseError(ErrorCode::SyntaxError, "unexpected character '" + shown + "'", s);
      }
    }
    i += width;
    push(kind, start, i);
  }
  out.push_back({TokenKind::end, {}, here(source.size())});
  return out;
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::identifier: return "identifier '" + token.text + "'";
    case TokenKind::keyword: return "keyword " + token.text;
    case TokenKind::number: return "number " + token.text;
    default: return std::string(to_string(token.kind));
  }
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& TokenCursor::advance() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenCursor::check_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::keyword && t.text == word;
}

bool TokenCursor::accept(TokenKind kind) {
  if (!check(kind)) return false;
  advance();
  return true;
}

bool TokenCursor::accept_keyword(std::string_view word) {
  if (!check_keyword(word)) return false;
  advance();
  return true;
}

const Token& TokenCursor::expect(TokenKind kind) {
  if (!check(kind)) fail({std::string(to_string(kind))});
  return advance();
}

const Token& TokenCursor::expect_keyword(std::string_view word) {
  if (!check_keyword(word)) fail({std::string(word)});
  return advance();
}

const Token& TokenCursor::expect_identifier(std::string_view what) {
  if (!check(TokenKind::identifier)) fail({std::string(what)});
  return advance();
}

void TokenCursor::fail(std::vector<std::string> expected) const { fail_at(peek(), std::move(expected)); }

void TokenCursor::fail_at(const Token& token, std::vector<std::string> expected) const {
  std::string message = "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) message += i + 1 == expected.size() ? " or " : ", ";
    message += expected[i];
  }
  message += ", found " + describe(token);
  throw ParseError(ErrorCode::SyntaxError, message, token.span, std::move(expected));
}

Span TokenCursor::span_from(const Token& first) const {
  const Token& last = tokens_[pos_ == 0 ? 0 : pos_ - 1];
  Span s = first.span;
  s.length = last.span.offset + last.span.length - first.span.offset;
  return s;
}

}  // namespace localfeat
