//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/validator.hpp"

#include <map>
#include <optional>

namespace pathharden {

std::string_view validation_code_name(ValidationCode code) {
  switch (code) {
    case ValidationCode::DuplicateInput:
      return "duplicate-input";
    case ValidationCode::DuplicateBinding:
      return "duplicate-binding";
    case ValidationCode::UndeclaredVariable:
      return "undeclared-variable";
    case ValidationCode::TypeMismatch:
      return "type-mismatch";
    case ValidationCode::InvalidWindowLength:
      return "invalid-window-length";
    case ValidationCode::InvalidDigest:
      return "invalid-digest";
  }
  return "?";
}

ValidationFailure::ValidationFailure(std::vector<ValidationError> errors)
    : Error(errors.empty()
                ? std::string("validation failed")
                : errors.front().message + " (line " +
                      std::to_string(errors.front().span.line) + ", column " +
                      std::to_string(errors.front().span.column) +
                      (errors.size() > 1
                           ? "; and " + std::to_string(errors.size() - 1) +
                                 " more error(s))"
                           : ")")),
      errors_(std::move(errors)) {}

namespace {

class Checker {
 public:
  explicit Checker(const Program& p) : program_(p) {}

  std::vector<ValidationError> run() {
    std::map<std::string, std::optional<ValueType>> inputs;
    for (const auto& decl : program_.inputs) {
      if (inputs.count(decl.name)) {
        error(ValidationCode::DuplicateInput,
              "input \"" + decl.name + "\" declared twice", decl.span);
      }
      inputs.emplace(decl.name, decl.type);
    }
    scopes_.push_back(std::move(inputs));
    check_block(program_.body);
    return std::move(errors_);
  }

 private:
  void error(ValidationCode code, std::string message, SourceSpan span) {
    errors_.push_back({code, std::move(message), span});
  }

  // Outer optional: is the name bound at all. Inner optional: its type, empty
  // when the binding itself failed to type-check.
  std::optional<std::optional<ValueType>> lookup(
      const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (const auto found = it->find(name); found != it->end()) {
        return found->second;
      }
    }
    return std::nullopt;
  }

  void check_block(const Block& block) {
    scopes_.emplace_back();
    for (const auto& stmt : block) check_stmt(*stmt);
    scopes_.pop_back();
  }

  void check_stmt(const Stmt& stmt) {
    if (const auto* let = std::get_if<LetStmt>(&stmt.node)) {
      const auto type = infer(*let->value);
      if (lookup(let->name)) {
        error(ValidationCode::DuplicateBinding,
              "\"" + let->name + "\" is already bound; rebinding and "
              "shadowing are not allowed",
              stmt.span);
      } else {
        scopes_.back().emplace(let->name, type);
      }
    } else if (const auto* iff = std::get_if<IfStmt>(&stmt.node)) {
      const auto type = infer(*iff->cond);
      if (type && *type != ValueType::Bool) {
        error(ValidationCode::TypeMismatch,
              "if condition must be bool, got " +
                  std::string(type_name(*type)),
              iff->cond->span);
      }
      check_block(iff->then_block);
      if (iff->else_block) check_block(*iff->else_block);
    }
    // accept/reject need no checks
  }

  void check_digest(const Digest& d, SourceSpan span) {
    if (const auto why = check_config(d.config)) {
      error(ValidationCode::InvalidDigest, *why, span);
    } else if (d.bytes.size() != d.config.truncate_bits / 8) {
      error(ValidationCode::InvalidDigest,
            "digest byte count does not match truncation width", span);
    }
  }

  // Returns nullopt when a sub-expression already failed; the failure has
  // been reported, so callers stay quiet.
  std::optional<ValueType> infer(const Expr& e) {
    using R = std::optional<ValueType>;
    return std::visit(
        [&](const auto& node) -> R {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return ValueType::Int;
          } else if constexpr (std::is_same_v<T, StrLit>) {
            return ValueType::String;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            if (const auto t = lookup(node.name)) return *t;  // may be empty
            error(ValidationCode::UndeclaredVariable,
                  "use of undeclared variable \"" + node.name + "\"", e.span);
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, Cmp>) {
            const auto lhs = infer(*node.lhs);
            const auto rhs = infer(*node.rhs);
            if (!lhs || !rhs) return std::nullopt;
            if (*lhs != *rhs) {
              error(ValidationCode::TypeMismatch,
                    std::string("comparison operands must have equal type; "
                                "got ") +
                        std::string(type_name(*lhs)) + " vs " +
                        std::string(type_name(*rhs)),
                    e.span);
              return std::nullopt;
            }
            if (*lhs == ValueType::Bool) {
              error(ValidationCode::TypeMismatch,
                    "comparison operands must be int or string", e.span);
              return std::nullopt;
            }
            if (is_order_op(node.op) && *lhs != ValueType::Int) {
              error(ValidationCode::TypeMismatch,
                    std::string("ordering comparison requires int operands, "
                                "got ") +
                        std::string(type_name(*lhs)),
                    e.span);
              return std::nullopt;
            }
            return ValueType::Bool;
          } else if constexpr (std::is_same_v<T, LogicalAnd> ||
                               std::is_same_v<T, LogicalOr>) {
            const auto lhs = infer(*node.lhs);
            const auto rhs = infer(*node.rhs);
            bool ok = true;
            if (lhs && *lhs != ValueType::Bool) {
              error(ValidationCode::TypeMismatch,
                    "logical operator requires bool operands",
                    node.lhs->span);
              ok = false;
            }
            if (rhs && *rhs != ValueType::Bool) {
              error(ValidationCode::TypeMismatch,
                    "logical operator requires bool operands",
                    node.rhs->span);
              ok = false;
            }
            if (!lhs || !rhs || !ok) return std::nullopt;
            return ValueType::Bool;
          } else if constexpr (std::is_same_v<T, LogicalNot>) {
            const auto arg = infer(*node.operand);
            if (!arg) return std::nullopt;
            if (*arg != ValueType::Bool) {
              error(ValidationCode::TypeMismatch,
                    "'!' requires a bool operand", node.operand->span);
              return std::nullopt;
            }
            return ValueType::Bool;
          } else if constexpr (std::is_same_v<T, ContainsCall>) {
            expect_type(*node.haystack, ValueType::String, "contains");
            expect_type(*node.needle, ValueType::String, "contains");
            return ValueType::Bool;
          } else if constexpr (std::is_same_v<T, LengthCall>) {
            expect_type(*node.arg, ValueType::String, "length");
            return ValueType::Int;
          } else if constexpr (std::is_same_v<T, SubstringCall>) {
            expect_type(*node.str, ValueType::String, "substring");
            expect_type(*node.start, ValueType::Int, "substring");
            expect_type(*node.len, ValueType::Int, "substring");
            return ValueType::String;
          } else if constexpr (std::is_same_v<T, HashEqCall>) {
            const auto arg = infer(*node.value);
            if (arg && *arg == ValueType::Bool) {
              error(ValidationCode::TypeMismatch,
                    "hash_eq requires an int or string argument",
                    node.value->span);
            }
            check_digest(node.digest, e.span);
            return ValueType::Bool;
          } else if constexpr (std::is_same_v<T, HashContainsCall>) {
            expect_type(*node.haystack, ValueType::String, "hash_contains");
            check_digest(node.digest, e.span);
            if (node.window_len == 0) {
              error(ValidationCode::InvalidWindowLength,
                    "hash_contains window length must be at least 1", e.span);
            }
            return ValueType::Bool;
          }
        },
        e.node);
  }

  void expect_type(const Expr& e, ValueType want, const char* context) {
    const auto got = infer(e);
    if (got && *got != want) {
      error(ValidationCode::TypeMismatch,
            std::string(context) + " requires " +
                std::string(type_name(want)) + ", got " +
                std::string(type_name(*got)),
            e.span);
    }
  }

  const Program& program_;
  std::vector<std::map<std::string, std::optional<ValueType>>> scopes_;
  std::vector<ValidationError> errors_;
};

}  // namespace

std::vector<ValidationError> validate(const Program& p) {
  return Checker(p).run();
}

}  // namespace pathharden
