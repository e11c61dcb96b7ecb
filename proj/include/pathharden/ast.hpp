//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathharden/common.hpp"
#include "pathharden/digest.hpp"

namespace pathharden {

enum class ValueType { Int, String, Bool };

std::string_view type_name(ValueType t);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLit {
  std::uint64_t value = 0;
};

struct StrLit {
  Bytes value;
};

struct VarRef {
  std::string name;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view cmp_op_text(CmpOp op);
bool is_order_op(CmpOp op);

struct Cmp {
  CmpOp op = CmpOp::Eq;
  ExprPtr lhs, rhs;
};

struct LogicalAnd {
  ExprPtr lhs, rhs;
};

struct LogicalOr {
  ExprPtr lhs, rhs;
};

struct LogicalNot {
  ExprPtr operand;
};

struct ContainsCall {
  ExprPtr haystack, needle;
};

struct LengthCall {
  ExprPtr arg;
};

struct SubstringCall {
  ExprPtr str, start, len;
};

struct HashEqCall {
  ExprPtr value;
  Digest digest;
};

struct HashContainsCall {
  ExprPtr haystack;
  Digest digest;
  std::uint64_t window_len = 0;
};

using ExprNode =
    std::variant<IntLit, StrLit, VarRef, Cmp, LogicalAnd, LogicalOr,
                 LogicalNot, ContainsCall, LengthCall, SubstringCall,
                 HashEqCall, HashContainsCall>;

struct Expr {
  SourceSpan span;
  ExprNode node;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct LetStmt {
  std::string name;
  ExprPtr value;
};

struct IfStmt {
  ExprPtr cond;
  Block then_block;
  std::optional<Block> else_block;
};

struct AcceptStmt {};
struct RejectStmt {};

using StmtNode = std::variant<LetStmt, IfStmt, AcceptStmt, RejectStmt>;

struct Stmt {
  SourceSpan span;
  StmtNode node;
};

struct InputDecl {
  std::string name;
  ValueType type = ValueType::Int;
  SourceSpan span;
};

struct Program {
  std::vector<InputDecl> inputs;
  Block body;
};

ExprPtr clone(const Expr& e);
StmtPtr clone(const Stmt& s);
Block clone(const Block& b);
Program clone(const Program& p);

// Structural equality; source spans are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const Block& a, const Block& b);
bool equal(const Program& a, const Program& b);

// Convenience builders used by the transformer and by tests.
ExprPtr make_expr(ExprNode node, SourceSpan span = {});

}  // namespace pathharden
