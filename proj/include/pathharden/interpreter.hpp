//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <map>
#include <variant>

#include "pathharden/ast.hpp"

namespace pathharden {

enum class Verdict { Accept, Reject };

std::string_view verdict_name(Verdict v);

using Value = std::variant<std::uint64_t, Bytes, bool>;

ValueType value_type(const Value& v);

// One value per declared input, matching the declared types.
using InputBinding = std::map<std::string, Value>;

// Deterministic operation counters. steps counts every AST node evaluated
// plus the per-position work of the scanning builtins, so it grows with
// input length the same way wall time does.
struct CostReport {
  std::uint64_t steps = 0;
  std::uint64_t hash_invocations = 0;
  std::uint64_t bytes_hashed = 0;
};

struct EvalResult {
  Verdict verdict = Verdict::Accept;
  CostReport cost;
};

// Executes p on the given inputs. Throws TypeFault only when the program was
// never validated; substring out of range yields the empty string.
EvalResult evaluate(const Program& p, const InputBinding& binding);

// Expression-level entry point used by the attack oracles: evaluates e in an
// environment of already-bound names.
Value evaluate_expr(const Expr& e, const std::map<std::string, Value>& env,
                    CostReport& cost);

}  // namespace pathharden
