//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Scans programs for conditionals that compare inputs against constants and
// decides which of them can be replaced by hash comparisons.
#ifndef PATHHARDEN_CLASSIFIER_HPP
#define PATHHARDEN_CLASSIFIER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathharden/ast.hpp"
#include "pathharden/digest.hpp"

namespace pathharden {

enum class SiteKind {
  PointEquality,
  SetMembership,
  SubstringMatch,
  RangeCheck,
  SmallGuessingDomain,
  NonConstantComparand,
  Unsupported,
};

bool is_hardenable_kind(SiteKind kind);
std::string_view site_kind_name(SiteKind kind);

struct ClassifierPolicy {
  // Minimum guessing work, in bits, for a comparand to count as hard to
  // find by black-box search.
  double min_entropy_bits = 64.0;
  // Substring needles shorter than this are rejected outright.
  std::size_t min_needle_len = 8;
  // Entropy credited per byte of a string literal. Lower it for literals
  // drawn from narrow alphabets (e.g. 3.32 for decimal digits).
  double charset_bits_per_byte = 8.0;
};

// Returns a diagnostic when the policy is out of range, nullopt when usable.
std::optional<std::string> check_policy(const ClassifierPolicy& policy);

struct Classification {
  SourceSpan site;
  SiteKind kind = SiteKind::Unsupported;
  bool hardenable = false;
  // True when the condition already consists of hash comparisons; such
  // sites are left alone by the transformer and are expected to resist
  // black-box attack.
  bool already_hardened = false;
  // The input variable the condition tests, when the condition pins one
  // down; empty otherwise. Attacks drive this variable.
  std::string var;
  ValueType var_type = ValueType::Int;
  // Comparand values: one for point equality, the distinct members in
  // disjunct order for set membership, the needle for substring matches.
  std::vector<HashableValue> constants;
  Bytes needle;
  bool has_needle = false;
  double guess_cost_bits = 0.0;
  // Printed form of the condition, truncated for display.
  std::string detail;
  // Why the site is not hardenable; empty for hardenable sites.
  std::string reason;
};

// Classifies one type-correct boolean condition. Total: every expression
// receives a verdict. `program` supplies the declared-input environment used
// to tell inputs from let-bound variables.
Classification classify_conditional(const Expr& cond, const Program& program,
                                    const ClassifierPolicy& policy);

// One Classification per If condition, in source pre-order (a conditional
// is listed before any conditionals nested under it).
std::vector<Classification> scan_program(const Program& p,
                                         const ClassifierPolicy& policy);

// Reported guessing work in bits. Range checks report the binary-search
// query exponent log2(log2(domain)) rather than an entropy figure.
double estimate_guess_cost(const Classification& c);

}  // namespace pathharden

#endif  // PATHHARDEN_CLASSIFIER_HPP
