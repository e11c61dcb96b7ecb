//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Random type-correct program generator for round-trip and totality tests.
#ifndef PATHHARDEN_TESTS_ASTGEN_HPP
#define PATHHARDEN_TESTS_ASTGEN_HPP

#include <string>
#include <utility>
#include <vector>

#include "pathharden/ast.hpp"
#include "pathharden/digest.hpp"
#include "pathharden/rng.hpp"

namespace pathharden::testsupport {

// Generates valid programs that exercise the whole grammar: every statement
// form, every operator, every builtin, digest literals with and without
// truncation and salt, and string literals that need escaping.
class ProgramGen {
 public:
  explicit ProgramGen(Rng& rng) : rng_(rng) {}

  Program program() {
    Program p;
    names_.clear();
    counter_ = 0;
    std::size_t n_inputs = 1 + rng_.below(3);
    for (std::size_t i = 0; i < n_inputs; ++i) {
      ValueType t = rng_.chance(1, 2) ? ValueType::Int : ValueType::String;
      p.inputs.push_back({fresh_name(t), t, {}});
    }
    p.body = block(2);
    return p;
  }

 private:
  std::string fresh_name(ValueType t) {
    std::string name = (t == ValueType::Int ? "n" : "s");
    name += std::to_string(counter_++);
    names_.emplace_back(name, t);
    return name;
  }

  // Picks a visible variable of type t, if any.
  const std::string* pick_var(ValueType t) {
    std::vector<const std::string*> hits;
    for (const auto& [name, type] : names_) {
      if (type == t) hits.push_back(&name);
    }
    if (hits.empty()) return nullptr;
    return hits[rng_.below(hits.size())];
  }

  Bytes random_bytes() {
    std::size_t len = rng_.below(9);
    Bytes out;
    for (std::size_t i = 0; i < len; ++i) {
      // Mix printable bytes with ones that force \xNN, quote, and backslash
      // escapes through the printer.
      switch (rng_.below(5)) {
        case 0: out.push_back(static_cast<char>(rng_.below(256))); break;
        case 1: out.push_back('"'); break;
        case 2: out.push_back('\\'); break;
        default: out.push_back(static_cast<char>('a' + rng_.below(26))); break;
      }
    }
    return out;
  }

  Digest random_digest() {
    Digest d;
    d.config.truncate_bits = 8 * static_cast<unsigned>(1 + rng_.below(32));
    if (rng_.chance(1, 2)) {
      std::size_t salt_len = 1 + rng_.below(8);
      for (std::size_t i = 0; i < salt_len; ++i) {
        d.config.salt.push_back(static_cast<std::uint8_t>(rng_.below(256)));
      }
    }
    for (unsigned i = 0; i < d.config.truncate_bits / 8; ++i) {
      d.bytes.push_back(static_cast<std::uint8_t>(rng_.below(256)));
    }
    return d;
  }

  ExprPtr int_expr(int depth) {
    const std::string* v = pick_var(ValueType::Int);
    switch (depth <= 0 ? rng_.below(2) : rng_.below(4)) {
      case 0:
        return make_expr(IntLit{rng_.next_u64() >> rng_.below(64)});
      case 1:
        if (v) return make_expr(VarRef{*v});
        return make_expr(IntLit{rng_.below(1000)});
      case 2:
        return make_expr(LengthCall{str_expr(depth - 1)});
      default: {
        SubstringCall sub;
        sub.str = str_expr(depth - 1);
        sub.start = int_expr(depth - 1);
        sub.len = int_expr(depth - 1);
        return make_expr(LengthCall{make_expr(std::move(sub))});
      }
    }
  }

  ExprPtr str_expr(int depth) {
    const std::string* v = pick_var(ValueType::String);
    switch (depth <= 0 ? rng_.below(2) : rng_.below(3)) {
      case 0:
        return make_expr(StrLit{random_bytes()});
      case 1:
        if (v) return make_expr(VarRef{*v});
        return make_expr(StrLit{random_bytes()});
      default: {
        SubstringCall sub;
        sub.str = str_expr(depth - 1);
        sub.start = int_expr(depth - 1);
        sub.len = int_expr(depth - 1);
        return make_expr(std::move(sub));
      }
    }
  }

  ExprPtr bool_expr(int depth) {
    switch (depth <= 0 ? rng_.below(3) : rng_.below(7)) {
      case 0: {
        Cmp c;
        if (rng_.chance(1, 2)) {
          c.op = static_cast<CmpOp>(rng_.below(6));
          c.lhs = int_expr(depth - 1);
          c.rhs = int_expr(depth - 1);
        } else {
          // Strings only support equality; ordering is an int affair.
          c.op = static_cast<CmpOp>(rng_.below(2));
          c.lhs = str_expr(depth - 1);
          c.rhs = str_expr(depth - 1);
        }
        return make_expr(std::move(c));
      }
      case 1: {
        ContainsCall cc;
        cc.haystack = str_expr(depth - 1);
        cc.needle = str_expr(depth - 1);
        return make_expr(std::move(cc));
      }
      case 2: {
        HashEqCall he;
        he.value = rng_.chance(1, 2) ? int_expr(depth - 1) : str_expr(depth - 1);
        he.digest = random_digest();
        return make_expr(std::move(he));
      }
      case 3: {
        HashContainsCall hc;
        hc.haystack = str_expr(depth - 1);
        hc.digest = random_digest();
        hc.window_len = 1 + rng_.below(32);
        return make_expr(std::move(hc));
      }
      case 4:
        return make_expr(
            LogicalAnd{bool_expr(depth - 1), bool_expr(depth - 1)});
      case 5:
        return make_expr(LogicalOr{bool_expr(depth - 1), bool_expr(depth - 1)});
      default:
        return make_expr(LogicalNot{bool_expr(depth - 1)});
    }
  }

  Block block(int depth) {
    Block b;
    std::size_t n = rng_.below(4);
    std::size_t scope_mark = names_.size();
    for (std::size_t i = 0; i < n; ++i) {
      switch (depth <= 0 ? rng_.below(3) : rng_.below(4)) {
        case 0: {
          LetStmt let;
          ValueType t = rng_.chance(1, 2) ? ValueType::Int : ValueType::String;
          let.value = t == ValueType::Int ? int_expr(depth) : str_expr(depth);
          let.name = fresh_name(t);
          b.push_back(std::make_unique<Stmt>(
              Stmt{SourceSpan{}, StmtNode{std::move(let)}}));
          break;
        }
        case 1:
          b.push_back(std::make_unique<Stmt>(
              Stmt{SourceSpan{}, StmtNode{AcceptStmt{}}}));
          break;
        case 2:
          b.push_back(std::make_unique<Stmt>(
              Stmt{SourceSpan{}, StmtNode{RejectStmt{}}}));
          break;
        default: {
          IfStmt ifs;
          ifs.cond = bool_expr(depth);
          ifs.then_block = block(depth - 1);
          if (rng_.chance(1, 2)) ifs.else_block = block(depth - 1);
          b.push_back(std::make_unique<Stmt>(
              Stmt{SourceSpan{}, StmtNode{std::move(ifs)}}));
          break;
        }
      }
    }
    // Let-bound names go out of scope with the block; keeping them visible
    // would let a sibling block reuse them and trip the rebinding rule.
    names_.resize(scope_mark);
    return b;
  }

  Rng& rng_;
  std::vector<std::pair<std::string, ValueType>> names_;
  std::size_t counter_ = 0;
};

}  // namespace pathharden::testsupport

#endif  // PATHHARDEN_TESTS_ASTGEN_HPP
