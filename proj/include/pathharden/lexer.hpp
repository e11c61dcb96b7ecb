//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <string>
#include <vector>

#include "pathharden/common.hpp"
#include "pathharden/digest.hpp"

namespace pathharden {

enum class TokenKind {
  // keywords
  KwInput,
  KwInt,
  KwString,
  KwLet,
  KwIf,
  KwElse,
  KwAccept,
  KwReject,
  KwContains,
  KwLength,
  KwSubstring,
  KwHashEq,
  KwHashContains,
  // literals and names
  Ident,
  IntLit,
  StrLit,
  DigestLit,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semicolon,
  Colon,
  Comma,
  Assign,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
  Bang,
  EndOfInput,
};

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  SourceSpan span;
  std::string text;        // Ident: name; keywords/punct: lexeme
  std::uint64_t int_value = 0;
  Bytes str_value;         // StrLit: unescaped bytes
  Digest digest_value;     // DigestLit
};

// Tokenizes the whole source. Throws ParseError on any malformed input;
// never aborts, whatever the bytes.
std::vector<Token> tokenize(std::string_view source);

}  // namespace pathharden
