//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/lexer.hpp"

#include <unordered_map>

namespace pathharden {
namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"input", TokenKind::KwInput},
      {"int", TokenKind::KwInt},
      {"string", TokenKind::KwString},
      {"let", TokenKind::KwLet},
      {"if", TokenKind::KwIf},
      {"else", TokenKind::KwElse},
      {"accept", TokenKind::KwAccept},
      {"reject", TokenKind::KwReject},
      {"contains", TokenKind::KwContains},
      {"length", TokenKind::KwLength},
      {"substring", TokenKind::KwSubstring},
      {"hash_eq", TokenKind::KwHashEq},
      {"hash_contains", TokenKind::KwHashContains},
  };
  return table;
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_whitespace();
      Token tok = next_token();
      const bool done = tok.kind == TokenKind::EndOfInput;
      tokens.push_back(std::move(tok));
      if (done) break;
    }
    return tokens;
  }

 private:
  [[noreturn]] void fail(const std::string& message, SourceSpan span) {
    throw ParseError(message, span);
  }

  SourceSpan here() const { return SourceSpan{line_, column_, pos_}; }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_whitespace() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    Token tok;
    tok.span = here();
    if (at_end()) {
      tok.kind = TokenKind::EndOfInput;
      return tok;
    }
    const char c = peek();
    if (is_ident_start(c)) return lex_word();
    if (c >= '0' && c <= '9') return lex_int();
    if (c == '"') return lex_string();
    return lex_punct();
  }

  Token lex_word() {
    Token tok;
    tok.span = here();
    std::string word;
    while (!at_end() && is_ident_char(peek())) word.push_back(advance());

    if (word == "digest") return lex_digest(tok.span);

    const auto& table = keyword_table();
    if (const auto it = table.find(word); it != table.end()) {
      tok.kind = it->second;
      tok.text = word;
    } else {
      tok.kind = TokenKind::Ident;
      tok.text = std::move(word);
    }
    return tok;
  }

  Token lex_int() {
    Token tok;
    tok.span = here();
    tok.kind = TokenKind::IntLit;
    std::uint64_t value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      const std::uint64_t digit = std::uint64_t(peek() - '0');
      if (value > (UINT64_MAX - digit) / 10) {
        fail("integer literal does not fit in 64 bits", tok.span);
      }
      value = value * 10 + digit;
      advance();
    }
    if (!at_end() && is_ident_start(peek())) {
      fail("malformed number", tok.span);
    }
    tok.int_value = value;
    return tok;
  }

  Token lex_string() {
    Token tok;
    tok.span = here();
    tok.kind = TokenKind::StrLit;
    advance();  // opening quote
    Bytes value;
    for (;;) {
      if (at_end()) fail("unterminated string literal", tok.span);
      const char c = advance();
      if (c == '"') break;
      if (c == '\n') fail("newline in string literal", tok.span);
      if (c == '\\') {
        if (at_end()) fail("unterminated escape sequence", tok.span);
        const char esc = advance();
        if (esc == '"') {
          value.push_back('"');
        } else if (esc == '\\') {
          value.push_back('\\');
        } else if (esc == 'x') {
          if (at_end()) fail("truncated \\x escape", tok.span);
          const int hi = hex_digit(advance());
          if (at_end()) fail("truncated \\x escape", tok.span);
          const int lo = hex_digit(advance());
          if (hi < 0 || lo < 0) fail("invalid \\x escape", tok.span);
          value.push_back(char(hi << 4 | lo));
        } else {
          fail(std::string("unknown escape \\") + esc, tok.span);
        }
      } else if (static_cast<unsigned char>(c) < 0x20 ||
                 static_cast<unsigned char>(c) > 0x7e) {
        fail("raw non-printable byte in string literal; use \\xNN", tok.span);
      } else {
        value.push_back(c);
      }
    }
    tok.str_value = std::move(value);
    return tok;
  }

  // digest"sha256[/t<bits>][/s<hex>]:<hex>" lexed as a single token
  Token lex_digest(SourceSpan start) {
    Token tok;
    tok.span = start;
    tok.kind = TokenKind::DigestLit;
    if (at_end() || peek() != '"') {
      fail("expected '\"' after digest", start);
    }
    advance();
    std::string payload;
    for (;;) {
      if (at_end()) fail("unterminated digest literal", start);
      const char c = advance();
      if (c == '"') break;
      const unsigned char uc = static_cast<unsigned char>(c);
      if (uc < 0x21 || uc > 0x7e) {
        fail("invalid byte in digest literal", start);
      }
      payload.push_back(c);
    }
    try {
      tok.digest_value = parse_digest(payload);
    } catch (const Error& e) {
      fail(e.what(), start);
    }
    return tok;
  }

  Token lex_punct() {
    Token tok;
    tok.span = here();
    const char c = advance();
    const auto two = [&](char second, TokenKind with, TokenKind without,
                         bool second_required = false) {
      if (!at_end() && peek() == second) {
        advance();
        tok.kind = with;
      } else if (second_required) {
        fail(std::string("unexpected character '") + c + "'", tok.span);
      } else {
        tok.kind = without;
      }
    };
    switch (c) {
      case '(':
        tok.kind = TokenKind::LParen;
        break;
      case ')':
        tok.kind = TokenKind::RParen;
        break;
      case '{':
        tok.kind = TokenKind::LBrace;
        break;
      case '}':
        tok.kind = TokenKind::RBrace;
        break;
      case ';':
        tok.kind = TokenKind::Semicolon;
        break;
      case ':':
        tok.kind = TokenKind::Colon;
        break;
      case ',':
        tok.kind = TokenKind::Comma;
        break;
      case '=':
        two('=', TokenKind::EqEq, TokenKind::Assign);
        break;
      case '!':
        two('=', TokenKind::NotEq, TokenKind::Bang);
        break;
      case '<':
        two('=', TokenKind::Le, TokenKind::Lt);
        break;
      case '>':
        two('=', TokenKind::Ge, TokenKind::Gt);
        break;
      case '&':
        two('&', TokenKind::AndAnd, TokenKind::AndAnd, /*second_required=*/true);
        break;
      case '|':
        two('|', TokenKind::OrOr, TokenKind::OrOr, /*second_required=*/true);
        break;
      default:
        fail("unexpected character (byte 0x" +
                 to_hex(std::string_view(&c, 1)) + ")",
             tok.span);
    }
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace pathharden
