//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Black-box attacks against single conditionals, and the cross-check that
// classifier verdicts match what the attacks actually achieve.
#ifndef PATHHARDEN_ATTACK_HPP
#define PATHHARDEN_ATTACK_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathharden/ast.hpp"
#include "pathharden/classifier.hpp"
#include "pathharden/interpreter.hpp"

namespace pathharden {

// Black-box view of one If condition: a predicate over a single input
// variable, with every other input pinned to generator-chosen values and
// every probe counted. Lets that lexically precede the conditional are
// re-evaluated on each query, so derived variables stay consistent with the
// probed value.
class ConditionalOracle {
 public:
  // site_index counts If statements in source pre-order. Throws
  // ClassificationMismatch when the index is out of range and TypeFault when
  // attacked_var is not a declared input.
  ConditionalOracle(const Program& p, std::size_t site_index,
                    const std::string& attacked_var, std::uint64_t seed);

  bool query(const Value& v);         // counted
  bool verify(const Value& v) const;  // uncounted, for post-hoc confirmation
  std::uint64_t queries() const { return queries_; }
  ValueType var_type() const { return var_type_; }
  const std::string& var() const { return var_; }

 private:
  bool eval(const Value& v) const;

  std::vector<std::pair<std::string, ExprPtr>> lets_;
  ExprPtr cond_;
  std::map<std::string, Value> fixed_;
  std::string var_;
  ValueType var_type_ = ValueType::Int;
  std::uint64_t queries_ = 0;
};

enum class Attacker { BinarySearch, Exhaustive, Dictionary };

std::string_view attacker_name(Attacker a);

struct AttackOutcome {
  Attacker attacker = Attacker::Dictionary;
  bool success = false;
  // Counted oracle probes, including the probe that hit. A value planted at
  // 0-based dictionary index i therefore costs i + 1 queries.
  std::uint64_t queries = 0;
  // The structural constant the attack pinned down (binary search reports
  // the threshold, which need not itself satisfy the predicate).
  std::optional<Value> recovered;
  // A satisfying input; whenever success is set, verify(witness) holds and
  // the probe that found it doubles as the confirmation query.
  std::optional<Value> witness;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::string note;
};

// Assumes a monotone threshold over the inclusive u64 range [lo, hi]: probes
// both ends, then bisects. Reports failure when the ends show no boundary
// (point functions, intervals, constant-false predicates). At most
// ceil(log2(hi - lo)) + 2 queries.
AttackOutcome binary_search_attack(ConditionalOracle& o, std::uint64_t lo = 0,
                                   std::uint64_t hi = UINT64_MAX);

// Lazy candidate stream: index -> value, nullopt once exhausted.
using Enumerator = std::function<std::optional<Value>(std::uint64_t)>;

// 0, 1, 2, ...
Enumerator int_enumerator();
// All byte strings ordered by length then lexicographically: "", "\x00",
// ..., up to max_len bytes.
Enumerator string_enumerator(std::size_t max_len);

AttackOutcome exhaustive_attack(ConditionalOracle& o,
                                const Enumerator& candidates,
                                std::uint64_t budget);

struct DictionarySpec {
  ValueType type = ValueType::String;
  std::size_t min_len = 0;
  std::size_t max_len = 64;
  // Forces the dictionary to contain a chosen value at a chosen 0-based
  // index, to model an attacker whose wordlist happens to include the
  // secret.
  std::optional<std::pair<std::uint64_t, Value>> planted;
};

AttackOutcome dictionary_attack(ConditionalOracle& o, const DictionarySpec& gen,
                                std::uint64_t budget, std::uint64_t seed);

struct AttackBudgets {
  std::uint64_t dictionary = 1000000;
  std::uint64_t exhaustive = 1000000;
  std::uint64_t seed = 0;
  std::size_t dict_min_len = 0;
  std::size_t dict_max_len = 64;
  // Per-site plants, keyed by site index.
  std::map<std::size_t, std::pair<std::uint64_t, Value>> planted;
};

struct SiteAttack {
  Classification classification;
  std::vector<AttackOutcome> outcomes;
  // False when no attack applies to the site's shape; such sites do not
  // count toward the verdict.
  bool attacked = false;
  // Query bound implied by the classification, for sites expected to fall.
  std::uint64_t predicted_queries = 0;
  bool consistent = true;
  std::string note;
};

struct AttackReport {
  std::vector<SiteAttack> sites;
  // PASS iff every attacked not-hardenable site was cracked within its
  // predicted queries and no hardenable (or already hardened) site was
  // cracked at all.
  bool pass = true;
  std::uint64_t seed = 0;
};

// Runs the attack matching each site's classification. Throws
// ClassificationMismatch when the classifications do not line up with p's
// If statements.
AttackReport attack_report(const Program& p,
                           const std::vector<Classification>& classifications,
                           const AttackBudgets& budgets);

}  // namespace pathharden

#endif  // PATHHARDEN_ATTACK_HPP
