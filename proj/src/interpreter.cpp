//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/interpreter.hpp"

#include <optional>

namespace pathharden {

std::string_view verdict_name(Verdict v) {
  return v == Verdict::Accept ? "accept" : "reject";
}

ValueType value_type(const Value& v) {
  if (std::holds_alternative<std::uint64_t>(v)) return ValueType::Int;
  if (std::holds_alternative<Bytes>(v)) return ValueType::String;
  return ValueType::Bool;
}

namespace {

[[noreturn]] void type_fault(const char* what, SourceSpan span) {
  throw TypeFault(std::string("type fault (program not validated?): ") +
                  what + " at line " + std::to_string(span.line));
}

class Machine {
 public:
  Machine(const std::map<std::string, Value>* globals, CostReport& cost)
      : cost_(cost) {
    if (globals) scopes_.push_back(*globals);
  }

  CostReport& cost() { return cost_; }

  std::optional<Verdict> run_block(const Block& block) {
    scopes_.emplace_back();
    for (const auto& stmt : block) {
      ++cost_.steps;
      if (const auto* let = std::get_if<LetStmt>(&stmt->node)) {
        scopes_.back().insert_or_assign(let->name, eval(*let->value));
      } else if (const auto* iff = std::get_if<IfStmt>(&stmt->node)) {
        const Value cond = eval(*iff->cond);
        const bool* take = std::get_if<bool>(&cond);
        if (!take) type_fault("if condition is not bool", stmt->span);
        std::optional<Verdict> verdict;
        if (*take) {
          verdict = run_block(iff->then_block);
        } else if (iff->else_block) {
          verdict = run_block(*iff->else_block);
        }
        if (verdict) {
          scopes_.pop_back();
          return verdict;
        }
      } else if (std::holds_alternative<AcceptStmt>(stmt->node)) {
        scopes_.pop_back();
        return Verdict::Accept;
      } else {
        scopes_.pop_back();
        return Verdict::Reject;
      }
    }
    scopes_.pop_back();
    return std::nullopt;
  }

  Value eval(const Expr& e) {
    ++cost_.steps;
    return std::visit(
        [&](const auto& node) -> Value {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return node.value;
          } else if constexpr (std::is_same_v<T, StrLit>) {
            return node.value;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
              if (const auto found = it->find(node.name);
                  found != it->end()) {
                return found->second;
              }
            }
            type_fault("unbound variable", e.span);
          } else if constexpr (std::is_same_v<T, Cmp>) {
            return eval_cmp(node, e.span);
          } else if constexpr (std::is_same_v<T, LogicalAnd>) {
            if (!as_bool(eval(*node.lhs), node.lhs->span)) return false;
            return as_bool(eval(*node.rhs), node.rhs->span);
          } else if constexpr (std::is_same_v<T, LogicalOr>) {
            if (as_bool(eval(*node.lhs), node.lhs->span)) return true;
            return as_bool(eval(*node.rhs), node.rhs->span);
          } else if constexpr (std::is_same_v<T, LogicalNot>) {
            return !as_bool(eval(*node.operand), node.operand->span);
          } else if constexpr (std::is_same_v<T, ContainsCall>) {
            const Bytes haystack =
                as_string(eval(*node.haystack), node.haystack->span);
            const Bytes needle =
                as_string(eval(*node.needle), node.needle->span);
            return eval_contains(haystack, needle);
          } else if constexpr (std::is_same_v<T, LengthCall>) {
            return std::uint64_t(
                as_string(eval(*node.arg), node.arg->span).size());
          } else if constexpr (std::is_same_v<T, SubstringCall>) {
            const Bytes s = as_string(eval(*node.str), node.str->span);
            const std::uint64_t start =
                as_int(eval(*node.start), node.start->span);
            const std::uint64_t len = as_int(eval(*node.len), node.len->span);
            // any out-of-range request yields the empty string
            if (start > s.size() || len > s.size() - start) return Bytes();
            cost_.steps += len;
            return s.substr(start, len);
          } else if constexpr (std::is_same_v<T, HashEqCall>) {
            const Value v = eval(*node.value);
            Bytes encoded;
            if (const auto* n = std::get_if<std::uint64_t>(&v)) {
              encoded = encode_value(HashableValue(*n));
            } else if (const auto* s = std::get_if<Bytes>(&v)) {
              encoded = encode_value(HashableValue(*s));
            } else {
              type_fault("hash_eq argument is bool", e.span);
            }
            cost_.hash_invocations += 1;
            cost_.bytes_hashed +=
                node.digest.config.salt.size() + encoded.size();
            return digest_eq(compute_digest(encoded, node.digest.config),
                             node.digest);
          } else if constexpr (std::is_same_v<T, HashContainsCall>) {
            const Bytes haystack =
                as_string(eval(*node.haystack), node.haystack->span);
            const ContainsResult r =
                hash_contains(haystack, node.digest, node.window_len);
            cost_.steps += r.windows_hashed;
            cost_.hash_invocations += r.windows_hashed;
            cost_.bytes_hashed +=
                r.windows_hashed *
                (node.digest.config.salt.size() + 1 + node.window_len);
            return r.found;
          }
        },
        e.node);
  }

 private:
  bool eval_contains(const Bytes& haystack, const Bytes& needle) {
    if (needle.size() > haystack.size()) return false;
    const std::size_t last = haystack.size() - needle.size();
    for (std::size_t i = 0; i <= last; ++i) {
      ++cost_.steps;
      if (haystack.compare(i, needle.size(), needle) == 0) return true;
    }
    return false;
  }

  Value eval_cmp(const Cmp& node, SourceSpan span) {
    const Value lhs = eval(*node.lhs);
    const Value rhs = eval(*node.rhs);
    if (const auto* a = std::get_if<std::uint64_t>(&lhs)) {
      const auto* b = std::get_if<std::uint64_t>(&rhs);
      if (!b) type_fault("comparison of int against non-int", span);
      switch (node.op) {
        case CmpOp::Eq:
          return *a == *b;
        case CmpOp::Ne:
          return *a != *b;
        case CmpOp::Lt:
          return *a < *b;
        case CmpOp::Le:
          return *a <= *b;
        case CmpOp::Gt:
          return *a > *b;
        case CmpOp::Ge:
          return *a >= *b;
      }
    }
    if (const auto* a = std::get_if<Bytes>(&lhs)) {
      const auto* b = std::get_if<Bytes>(&rhs);
      if (!b) type_fault("comparison of string against non-string", span);
      if (node.op == CmpOp::Eq) return *a == *b;
      if (node.op == CmpOp::Ne) return *a != *b;
      type_fault("ordering comparison on strings", span);
    }
    type_fault("comparison on bool operands", span);
  }

  bool as_bool(const Value& v, SourceSpan span) {
    const bool* b = std::get_if<bool>(&v);
    if (!b) type_fault("expected bool", span);
    return *b;
  }

  std::uint64_t as_int(const Value& v, SourceSpan span) {
    const std::uint64_t* n = std::get_if<std::uint64_t>(&v);
    if (!n) type_fault("expected int", span);
    return *n;
  }

  Bytes as_string(const Value& v, SourceSpan span) {
    const Bytes* s = std::get_if<Bytes>(&v);
    if (!s) type_fault("expected string", span);
    return *s;
  }

  CostReport& cost_;
  std::vector<std::map<std::string, Value>> scopes_;
};

}  // namespace

EvalResult evaluate(const Program& p, const InputBinding& binding) {
  for (const auto& decl : p.inputs) {
    const auto it = binding.find(decl.name);
    if (it == binding.end()) {
      throw TypeFault("missing value for input \"" + decl.name + "\"");
    }
    if (value_type(it->second) != decl.type) {
      throw TypeFault("input \"" + decl.name + "\" has the wrong type");
    }
  }
  if (binding.size() != p.inputs.size()) {
    throw TypeFault("binding provides values for undeclared inputs");
  }

  EvalResult result;
  std::map<std::string, Value> globals(binding.begin(), binding.end());
  Machine machine(&globals, result.cost);
  const auto verdict = machine.run_block(p.body);
  result.verdict = verdict.value_or(Verdict::Accept);
  return result;
}

Value evaluate_expr(const Expr& e, const std::map<std::string, Value>& env,
                    CostReport& cost) {
  Machine machine(&env, cost);
  return machine.eval(e);
}

}  // namespace pathharden
