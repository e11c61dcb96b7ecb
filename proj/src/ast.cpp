//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/ast.hpp"

namespace pathharden {

std::string_view type_name(ValueType t) {
  switch (t) {
    case ValueType::Int:
      return "int";
    case ValueType::String:
      return "string";
    case ValueType::Bool:
      return "bool";
  }
  return "?";
}

std::string_view cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "==";
    case CmpOp::Ne:
      return "!=";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

bool is_order_op(CmpOp op) {
  return op == CmpOp::Lt || op == CmpOp::Le || op == CmpOp::Gt ||
         op == CmpOp::Ge;
}

ExprPtr make_expr(ExprNode node, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->span = span;
  e->node = std::move(node);
  return e;
}

ExprPtr clone(const Expr& e) {
  ExprNode node = std::visit(
      Overloaded{
          [](const IntLit& n) -> ExprNode { return n; },
          [](const StrLit& n) -> ExprNode { return n; },
          [](const VarRef& n) -> ExprNode { return n; },
          [](const Cmp& n) -> ExprNode {
            return Cmp{n.op, clone(*n.lhs), clone(*n.rhs)};
          },
          [](const LogicalAnd& n) -> ExprNode {
            return LogicalAnd{clone(*n.lhs), clone(*n.rhs)};
          },
          [](const LogicalOr& n) -> ExprNode {
            return LogicalOr{clone(*n.lhs), clone(*n.rhs)};
          },
          [](const LogicalNot& n) -> ExprNode {
            return LogicalNot{clone(*n.operand)};
          },
          [](const ContainsCall& n) -> ExprNode {
            return ContainsCall{clone(*n.haystack), clone(*n.needle)};
          },
          [](const LengthCall& n) -> ExprNode {
            return LengthCall{clone(*n.arg)};
          },
          [](const SubstringCall& n) -> ExprNode {
            return SubstringCall{clone(*n.str), clone(*n.start),
                                 clone(*n.len)};
          },
          [](const HashEqCall& n) -> ExprNode {
            return HashEqCall{clone(*n.value), n.digest};
          },
          [](const HashContainsCall& n) -> ExprNode {
            return HashContainsCall{clone(*n.haystack), n.digest,
                                    n.window_len};
          },
      },
      e.node);
  return make_expr(std::move(node), e.span);
}

StmtPtr clone(const Stmt& s) {
  auto out = std::make_unique<Stmt>();
  out->span = s.span;
  out->node = std::visit(
      Overloaded{
          [](const LetStmt& n) -> StmtNode {
            return LetStmt{n.name, clone(*n.value)};
          },
          [](const IfStmt& n) -> StmtNode {
            IfStmt copy;
            copy.cond = clone(*n.cond);
            copy.then_block = clone(n.then_block);
            if (n.else_block) copy.else_block = clone(*n.else_block);
            return copy;
          },
          [](const AcceptStmt&) -> StmtNode { return AcceptStmt{}; },
          [](const RejectStmt&) -> StmtNode { return RejectStmt{}; },
      },
      s.node);
  return out;
}

Block clone(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) out.push_back(clone(*s));
  return out;
}

Program clone(const Program& p) {
  Program out;
  out.inputs = p.inputs;
  out.body = clone(p.body);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const IntLit& x) {
            return x.value == std::get<IntLit>(b.node).value;
          },
          [&](const StrLit& x) {
            return x.value == std::get<StrLit>(b.node).value;
          },
          [&](const VarRef& x) {
            return x.name == std::get<VarRef>(b.node).name;
          },
          [&](const Cmp& x) {
            const auto& y = std::get<Cmp>(b.node);
            return x.op == y.op && equal(*x.lhs, *y.lhs) &&
                   equal(*x.rhs, *y.rhs);
          },
          [&](const LogicalAnd& x) {
            const auto& y = std::get<LogicalAnd>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const LogicalOr& x) {
            const auto& y = std::get<LogicalOr>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const LogicalNot& x) {
            return equal(*x.operand, *std::get<LogicalNot>(b.node).operand);
          },
          [&](const ContainsCall& x) {
            const auto& y = std::get<ContainsCall>(b.node);
            return equal(*x.haystack, *y.haystack) &&
                   equal(*x.needle, *y.needle);
          },
          [&](const LengthCall& x) {
            return equal(*x.arg, *std::get<LengthCall>(b.node).arg);
          },
          [&](const SubstringCall& x) {
            const auto& y = std::get<SubstringCall>(b.node);
            return equal(*x.str, *y.str) && equal(*x.start, *y.start) &&
                   equal(*x.len, *y.len);
          },
          [&](const HashEqCall& x) {
            const auto& y = std::get<HashEqCall>(b.node);
            return x.digest == y.digest && equal(*x.value, *y.value);
          },
          [&](const HashContainsCall& x) {
            const auto& y = std::get<HashContainsCall>(b.node);
            return x.digest == y.digest && x.window_len == y.window_len &&
                   equal(*x.haystack, *y.haystack);
          },
      },
      a.node);
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const LetStmt& x) {
            const auto& y = std::get<LetStmt>(b.node);
            return x.name == y.name && equal(*x.value, *y.value);
          },
          [&](const IfStmt& x) {
            const auto& y = std::get<IfStmt>(b.node);
            if (!equal(*x.cond, *y.cond)) return false;
            if (!equal(x.then_block, y.then_block)) return false;
            if (x.else_block.has_value() != y.else_block.has_value()) {
              return false;
            }
            return !x.else_block || equal(*x.else_block, *y.else_block);
          },
          [&](const AcceptStmt&) { return true; },
          [&](const RejectStmt&) { return true; },
      },
      a.node);
}

bool equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(*a[i], *b[i])) return false;
  }
  return true;
}

bool equal(const Program& a, const Program& b) {
  if (a.inputs.size() != b.inputs.size()) return false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    if (a.inputs[i].name != b.inputs[i].name ||
        a.inputs[i].type != b.inputs[i].type) {
      return false;
    }
  }
  return equal(a.body, b.body);
}

}  // namespace pathharden
