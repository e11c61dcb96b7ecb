//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/parser.hpp"

#include "pathharden/lexer.hpp"
#include "pathharden/validator.hpp"

namespace pathharden {
namespace {

// Recursive descent over the token stream.
//
//   program := decl* stmt*
//   decl    := "input" IDENT ":" ("int" | "string") ";"
//   stmt    := "let" IDENT "=" expr ";"
//            | "if" "(" expr ")" block ("else" block)?
//            | "accept" ";" | "reject" ";"
//   block   := "{" stmt* "}"
//   expr    := and_expr ("||" and_expr)*
//   and_expr := not_expr ("&&" not_expr)*
//   not_expr := "!" not_expr | comparison
//   comparison := primary (cmp_op primary)?
//   primary := INT | STRING | IDENT | "(" expr ")" | call
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program parse_program() {
    Program p;
    while (at(TokenKind::KwInput)) p.inputs.push_back(parse_decl());
    while (!at(TokenKind::EndOfInput)) {
      if (at(TokenKind::KwInput)) {
        fail("input declarations must precede statements");
      }
      p.body.push_back(parse_stmt());
    }
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(TokenKind k) const { return peek().kind == k; }

  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().span);
  }

  const Token& expect(TokenKind k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return advance();
  }

  InputDecl parse_decl() {
    InputDecl decl;
    decl.span = peek().span;
    expect(TokenKind::KwInput, "\"input\"");
    decl.name = expect(TokenKind::Ident, "input name").text;
    expect(TokenKind::Colon, "':'");
    if (at(TokenKind::KwInt)) {
      advance();
      decl.type = ValueType::Int;
    } else if (at(TokenKind::KwString)) {
      advance();
      decl.type = ValueType::String;
    } else {
      fail("expected type \"int\" or \"string\"");
    }
    expect(TokenKind::Semicolon, "';'");
    return decl;
  }

  StmtPtr parse_stmt() {
    auto stmt = std::make_unique<Stmt>();
    stmt->span = peek().span;
    switch (peek().kind) {
      case TokenKind::KwLet: {
        advance();
        LetStmt let;
        let.name = expect(TokenKind::Ident, "binding name").text;
        expect(TokenKind::Assign, "'='");
        let.value = parse_expr();
        expect(TokenKind::Semicolon, "';'");
        stmt->node = std::move(let);
        break;
      }
      case TokenKind::KwIf: {
        advance();
        IfStmt iff;
        expect(TokenKind::LParen, "'('");
        iff.cond = parse_expr();
        expect(TokenKind::RParen, "')'");
        iff.then_block = parse_block();
        if (at(TokenKind::KwElse)) {
          advance();
          iff.else_block = parse_block();
        }
        stmt->node = std::move(iff);
        break;
      }
      case TokenKind::KwAccept:
        advance();
        expect(TokenKind::Semicolon, "';'");
        stmt->node = AcceptStmt{};
        break;
      case TokenKind::KwReject:
        advance();
        expect(TokenKind::Semicolon, "';'");
        stmt->node = RejectStmt{};
        break;
      default:
        fail("expected a statement");
    }
    return stmt;
  }

  Block parse_block() {
    expect(TokenKind::LBrace, "'{'");
    Block block;
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::EndOfInput)) fail("unterminated block, expected '}'");
      block.push_back(parse_stmt());
    }
    advance();
    return block;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_and();
    while (at(TokenKind::OrOr)) {
      const SourceSpan span = lhs->span;
      advance();
      ExprPtr rhs = parse_and();
      lhs = make_expr(LogicalOr{std::move(lhs), std::move(rhs)}, span);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at(TokenKind::AndAnd)) {
      const SourceSpan span = lhs->span;
      advance();
      ExprPtr rhs = parse_not();
      lhs = make_expr(LogicalAnd{std::move(lhs), std::move(rhs)}, span);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at(TokenKind::Bang)) {
      const SourceSpan span = peek().span;
      advance();
      return make_expr(LogicalNot{parse_not()}, span);
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_primary();
    CmpOp op;
    switch (peek().kind) {
      case TokenKind::EqEq:
        op = CmpOp::Eq;
        break;
      case TokenKind::NotEq:
        op = CmpOp::Ne;
        break;
      case TokenKind::Lt:
        op = CmpOp::Lt;
        break;
      case TokenKind::Le:
        op = CmpOp::Le;
        break;
      case TokenKind::Gt:
        op = CmpOp::Gt;
        break;
      case TokenKind::Ge:
        op = CmpOp::Ge;
        break;
      default:
        return lhs;
    }
    const SourceSpan span = lhs->span;
    advance();
    ExprPtr rhs = parse_primary();
    return make_expr(Cmp{op, std::move(lhs), std::move(rhs)}, span);
  }

  ExprPtr parse_primary() {
    const SourceSpan span = peek().span;
    switch (peek().kind) {
      case TokenKind::IntLit: {
        const std::uint64_t v = advance().int_value;
        return make_expr(IntLit{v}, span);
      }
      case TokenKind::StrLit: {
        Bytes v = advance().str_value;
        return make_expr(StrLit{std::move(v)}, span);
      }
      case TokenKind::Ident: {
        std::string name = advance().text;
        return make_expr(VarRef{std::move(name)}, span);
      }
      case TokenKind::LParen: {
        advance();
        ExprPtr inner = parse_expr();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::KwContains: {
        advance();
        expect(TokenKind::LParen, "'('");
        ContainsCall call;
        call.haystack = parse_expr();
        expect(TokenKind::Comma, "','");
        call.needle = parse_expr();
        expect(TokenKind::RParen, "')'");
        return make_expr(std::move(call), span);
      }
      case TokenKind::KwLength: {
        advance();
        expect(TokenKind::LParen, "'('");
        LengthCall call;
        call.arg = parse_expr();
        expect(TokenKind::RParen, "')'");
        return make_expr(std::move(call), span);
      }
      case TokenKind::KwSubstring: {
        advance();
        expect(TokenKind::LParen, "'('");
        SubstringCall call;
        call.str = parse_expr();
        expect(TokenKind::Comma, "','");
        call.start = parse_expr();
        expect(TokenKind::Comma, "','");
        call.len = parse_expr();
        expect(TokenKind::RParen, "')'");
        return make_expr(std::move(call), span);
      }
      case TokenKind::KwHashEq: {
        advance();
        expect(TokenKind::LParen, "'('");
        HashEqCall call;
        call.value = parse_expr();
        expect(TokenKind::Comma, "','");
        call.digest = expect(TokenKind::DigestLit, "digest literal")
                          .digest_value;
        expect(TokenKind::RParen, "')'");
        return make_expr(std::move(call), span);
      }
      case TokenKind::KwHashContains: {
        advance();
        expect(TokenKind::LParen, "'('");
        HashContainsCall call;
        call.haystack = parse_expr();
        expect(TokenKind::Comma, "','");
        call.digest = expect(TokenKind::DigestLit, "digest literal")
                          .digest_value;
        expect(TokenKind::Comma, "','");
        call.window_len =
            expect(TokenKind::IntLit, "window length").int_value;
        expect(TokenKind::RParen, "')'");
        return make_expr(std::move(call), span);
      }
      case TokenKind::DigestLit:
        fail("digest literals may appear only as hash_eq/hash_contains "
             "arguments");
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::string_view source) {
  return Parser(tokenize(source)).parse_program();
}

Program load_program(std::string_view source) {
  Program p = parse(source);
  const auto errors = validate(p);
  if (!errors.empty()) throw ValidationFailure(errors);
  return p;
}

}  // namespace pathharden
