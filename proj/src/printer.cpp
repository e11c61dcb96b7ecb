//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/printer.hpp"

namespace pathharden {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Binding strength, loosest first. A child prints parenthesized whenever its
// own level is below what its position requires.
enum Level : int {
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kCmp = 4,
  kPrimary = 5,
};

int level_of(const Expr& e) {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, LogicalOr>) {
          return kOr;
        } else if constexpr (std::is_same_v<T, LogicalAnd>) {
          return kAnd;
        } else if constexpr (std::is_same_v<T, LogicalNot>) {
          return kNot;
        } else if constexpr (std::is_same_v<T, Cmp>) {
          return kCmp;
        } else {
          return kPrimary;
        }
      },
      e.node);
}

class Printer {
 public:
  std::string print(const Program& p) {
    for (const auto& decl : p.inputs) {
      out_ += "input ";
      out_ += decl.name;
      out_ += ": ";
      out_ += type_name(decl.type);
      out_ += ";\n";
    }
    print_block_body(p.body, 0);
    return std::move(out_);
  }

  std::string take() { return std::move(out_); }

  void expr(const Expr& e, int min_level) {
    const bool parens = level_of(e) < min_level;
    if (parens) out_ += '(';
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            out_ += std::to_string(node.value);
          } else if constexpr (std::is_same_v<T, StrLit>) {
            out_ += format_string_literal(node.value);
          } else if constexpr (std::is_same_v<T, VarRef>) {
            out_ += node.name;
          } else if constexpr (std::is_same_v<T, Cmp>) {
            expr(*node.lhs, kPrimary);
            out_ += ' ';
            out_ += cmp_op_text(node.op);
            out_ += ' ';
            expr(*node.rhs, kPrimary);
          } else if constexpr (std::is_same_v<T, LogicalAnd>) {
            expr(*node.lhs, kAnd);
            out_ += " && ";
            expr(*node.rhs, kAnd + 1);
          } else if constexpr (std::is_same_v<T, LogicalOr>) {
            expr(*node.lhs, kOr);
            out_ += " || ";
            expr(*node.rhs, kOr + 1);
          } else if constexpr (std::is_same_v<T, LogicalNot>) {
            out_ += '!';
            // parenthesize comparisons under '!' for readability
            expr(*node.operand, kCmp + 1);
          } else if constexpr (std::is_same_v<T, ContainsCall>) {
            out_ += "contains(";
            expr(*node.haystack, kOr);
            out_ += ", ";
            expr(*node.needle, kOr);
            out_ += ')';
          } else if constexpr (std::is_same_v<T, LengthCall>) {
            out_ += "length(";
            expr(*node.arg, kOr);
            out_ += ')';
          } else if constexpr (std::is_same_v<T, SubstringCall>) {
            out_ += "substring(";
            expr(*node.str, kOr);
            out_ += ", ";
            expr(*node.start, kOr);
            out_ += ", ";
            expr(*node.len, kOr);
            out_ += ')';
          } else if constexpr (std::is_same_v<T, HashEqCall>) {
            out_ += "hash_eq(";
            expr(*node.value, kOr);
            out_ += ", digest\"";
            out_ += format_digest(node.digest);
            out_ += "\")";
          } else if constexpr (std::is_same_v<T, HashContainsCall>) {
            out_ += "hash_contains(";
            expr(*node.haystack, kOr);
            out_ += ", digest\"";
            out_ += format_digest(node.digest);
            out_ += "\", ";
            out_ += std::to_string(node.window_len);
            out_ += ')';
          }
        },
        e.node);
    if (parens) out_ += ')';
  }

 private:
  void indent(int depth) { out_.append(std::size_t(depth) * 2, ' '); }

  void print_block_body(const Block& block, int depth) {
    for (const auto& stmt : block) {
      std::visit(
          [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LetStmt>) {
              indent(depth);
              out_ += "let ";
              out_ += node.name;
              out_ += " = ";
              expr(*node.value, kOr);
              out_ += ";\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              indent(depth);
              out_ += "if (";
              expr(*node.cond, kOr);
              out_ += ") {\n";
              print_block_body(node.then_block, depth + 1);
              indent(depth);
              if (node.else_block) {
                out_ += "} else {\n";
                print_block_body(*node.else_block, depth + 1);
                indent(depth);
              }
              out_ += "}\n";
            } else if constexpr (std::is_same_v<T, AcceptStmt>) {
              indent(depth);
              out_ += "accept;\n";
            } else if constexpr (std::is_same_v<T, RejectStmt>) {
              indent(depth);
              out_ += "reject;\n";
            }
          },
          stmt->node);
    }
  }

  std::string out_;
};

}  // namespace

std::string format_string_literal(const Bytes& bytes) {
  std::string out = "\"";
  for (const char c : bytes) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (c == '"') {
      out += "\\\"";
    } else if (c == '\\') {
      out += "\\\\";
    } else if (uc >= 0x20 && uc <= 0x7e) {
      out += c;
    } else {
      out += "\\x";
      out += kHexDigits[uc >> 4];
      out += kHexDigits[uc & 0x0f];
    }
  }
  out += '"';
  return out;
}

std::string pretty_print(const Program& p) { return Printer().print(p); }

std::string print_expr(const Expr& e) {
  Printer printer;
  printer.expr(e, kOr);
  return printer.take();
}

}  // namespace pathharden
