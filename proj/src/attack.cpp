//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/attack.hpp"

#include <algorithm>

#include "pathharden/rng.hpp"

namespace pathharden {

namespace {

// Offset separating oracle-construction streams from per-query dictionary
// streams derived from the same user seed.
constexpr std::uint64_t kOracleStream = std::uint64_t(1) << 32;

struct SiteCapture {
  std::vector<const LetStmt*> lets;
  const Expr* cond = nullptr;
};

bool find_site(const Block& block, std::size_t target, std::size_t& counter,
               std::vector<const LetStmt*>& lets, SiteCapture& out) {
  const std::size_t entry = lets.size();
  for (const StmtPtr& stmt : block) {
    if (const auto* let = std::get_if<LetStmt>(&stmt->node)) {
      lets.push_back(let);
    } else if (const auto* ifs = std::get_if<IfStmt>(&stmt->node)) {
      if (counter == target) {
        out.lets = lets;
        out.cond = ifs->cond.get();
        return true;
      }
      ++counter;
      if (find_site(ifs->then_block, target, counter, lets, out)) return true;
      if (ifs->else_block &&
          find_site(*ifs->else_block, target, counter, lets, out)) {
        return true;
      }
    }
  }
  lets.resize(entry);
  return false;
}

}  // namespace

ConditionalOracle::ConditionalOracle(const Program& p, std::size_t site_index,
                                     const std::string& attacked_var,
                                     std::uint64_t seed) {
  SiteCapture capture;
  std::size_t counter = 0;
  std::vector<const LetStmt*> lets;
  if (!find_site(p.body, site_index, counter, lets, capture)) {
    throw ClassificationMismatch("program has no conditional at site index " +
                                 std::to_string(site_index));
  }
  for (const LetStmt* let : capture.lets) {
    lets_.emplace_back(let->name, clone(*let->value));
  }
  cond_ = clone(*capture.cond);

  const InputDecl* attacked = nullptr;
  Rng rng = Rng::for_index(seed, kOracleStream + site_index);
  for (const InputDecl& decl : p.inputs) {
    if (decl.name == attacked_var) attacked = &decl;
    if (decl.type == ValueType::Int) {
      fixed_.emplace(decl.name, rng.next_u64());
    } else {
      fixed_.emplace(decl.name, rng.bytes(std::size_t(rng.below(17))));
    }
  }
  if (!attacked) {
    throw TypeFault("attacked variable '" + attacked_var +
                    "' is not a declared input");
  }
  var_ = attacked->name;
  var_type_ = attacked->type;
}

bool ConditionalOracle::eval(const Value& v) const {
  if (value_type(v) != var_type_) {
    throw TypeFault("probe value type does not match the attacked input");
  }
  std::map<std::string, Value> env = fixed_;
  env[var_] = v;
  CostReport cost;
  for (const auto& [name, expr] : lets_) {
    env[name] = evaluate_expr(*expr, env, cost);
  }
  return std::get<bool>(evaluate_expr(*cond_, env, cost));
}

bool ConditionalOracle::query(const Value& v) {
  ++queries_;
  return eval(v);
}

bool ConditionalOracle::verify(const Value& v) const { return eval(v); }

std::string_view attacker_name(Attacker a) {
  switch (a) {
    case Attacker::BinarySearch: return "binary-search";
    case Attacker::Exhaustive: return "exhaustive";
    case Attacker::Dictionary: return "dictionary";
  }
  return "dictionary";
}

AttackOutcome binary_search_attack(ConditionalOracle& o, std::uint64_t lo,
                                   std::uint64_t hi) {
  AttackOutcome out;
  out.attacker = Attacker::BinarySearch;
  std::uint64_t width_bits = 0;
  for (std::uint64_t w = hi - lo; w > 0; w >>= 1) ++width_bits;
  out.budget = width_bits + 2;
  const std::uint64_t start = o.queries();

  const bool at_lo = o.query(Value(lo));
  if (lo == hi) {
    out.success = at_lo;
    if (at_lo) {
      out.recovered = Value(lo);
      out.witness = Value(lo);
    } else {
      out.note = "single-point domain does not satisfy the predicate";
    }
    out.queries = o.queries() - start;
    return out;
  }
  const bool at_hi = o.query(Value(hi));

  if (at_lo && at_hi) {
    out.success = true;
    out.recovered = Value(lo);
    out.witness = Value(lo);
    out.note = "predicate holds at both ends; no boundary inside the domain";
    out.queries = o.queries() - start;
    return out;
  }
  if (!at_lo && !at_hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const bool at_mid = o.query(Value(mid));
    if (at_mid) {
      out.witness = Value(mid);
      out.note =
          "predicate holds strictly inside the domain but at neither end; "
          "not a monotone threshold, giving up";
    } else {
      out.note = "no satisfying point at either end or the midpoint";
    }
    out.queries = o.queries() - start;
    return out;
  }

  // One end true, the other false: bisect down to the boundary.
  std::uint64_t a = lo, b = hi;
  while (b - a > 1) {
    const std::uint64_t mid = a + (b - a) / 2;
    if (o.query(Value(mid)) == at_lo) {
      a = mid;
    } else {
      b = mid;
    }
  }
  out.success = true;
  if (at_lo) {
    // True on the low side: b is the first failing value, the threshold.
    out.recovered = Value(b);
    out.witness = Value(a);
  } else {
    // True on the high side: b is the first satisfying value.
    out.recovered = Value(b);
    out.witness = Value(b);
  }
  out.queries = o.queries() - start;
  return out;
}

Enumerator int_enumerator() {
  return [](std::uint64_t index) { return std::optional<Value>(Value(index)); };
}

Enumerator string_enumerator(std::size_t max_len) {
  return [max_len](std::uint64_t index) -> std::optional<Value> {
    // Strings of length L start at cumulative index 1 + 256 + ... + 256^L-1.
    std::uint64_t block_start = 0;
    std::uint64_t block_size = 1;
    std::size_t len = 0;
    while (true) {
      if (index < block_start + block_size) break;
      if (len == max_len) return std::nullopt;
      block_start += block_size;
      ++len;
      if (block_size > (UINT64_MAX >> 8)) return std::nullopt;
      block_size <<= 8;
    }
    std::uint64_t offset = index - block_start;
    Bytes s(len, '\0');
    for (std::size_t i = len; i > 0; --i) {
      s[i - 1] = char(offset & 0xff);
      offset >>= 8;
    }
    return Value(std::move(s));
  };
}

AttackOutcome exhaustive_attack(ConditionalOracle& o,
                                const Enumerator& candidates,
                                std::uint64_t budget) {
  AttackOutcome out;
  out.attacker = Attacker::Exhaustive;
  out.budget = budget;
  const std::uint64_t start = o.queries();
  for (std::uint64_t i = 0; i < budget; ++i) {
    std::optional<Value> cand = candidates(i);
    if (!cand) {
      out.note = "candidate set exhausted";
      break;
    }
    if (o.query(*cand)) {
      out.success = true;
      out.recovered = *cand;
      out.witness = std::move(*cand);
      break;
    }
  }
  out.queries = o.queries() - start;
  return out;
}

AttackOutcome dictionary_attack(ConditionalOracle& o, const DictionarySpec& gen,
                                std::uint64_t budget, std::uint64_t seed) {
  AttackOutcome out;
  out.attacker = Attacker::Dictionary;
  out.budget = budget;
  out.seed = seed;
  const std::uint64_t start = o.queries();
  for (std::uint64_t i = 0; i < budget; ++i) {
    Value v;
    if (gen.planted && gen.planted->first == i) {
      v = gen.planted->second;
    } else {
      Rng rng = Rng::for_index(seed, i);
      if (gen.type == ValueType::Int) {
        v = rng.next_u64();
      } else {
        const std::size_t lo = std::min(gen.min_len, gen.max_len);
        const std::size_t hi = std::max(gen.min_len, gen.max_len);
        v = rng.bytes(std::size_t(rng.range(lo, hi)));
      }
    }
    if (o.query(v)) {
      out.success = true;
      out.recovered = v;
      out.witness = std::move(v);
      break;
    }
  }
  out.queries = o.queries() - start;
  return out;
}

namespace {

void collect_site_spans(const Block& block, std::vector<SourceSpan>& out) {
  for (const StmtPtr& stmt : block) {
    if (const auto* ifs = std::get_if<IfStmt>(&stmt->node)) {
      out.push_back(ifs->cond->span);
      collect_site_spans(ifs->then_block, out);
      if (ifs->else_block) collect_site_spans(*ifs->else_block, out);
    }
  }
}

std::uint64_t saturating_pow256(std::size_t exp) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > (UINT64_MAX >> 8)) return UINT64_MAX;
    v <<= 8;
  }
  return v;
}

// Upper bound on the enumeration index at which exhaustive search reaches
// the constant: c + 1 for ints, the count of strings no longer than the
// constant for strings.
std::uint64_t enumeration_bound(const HashableValue& v) {
  if (const auto* i = std::get_if<std::uint64_t>(&v)) {
    return *i == UINT64_MAX ? UINT64_MAX : *i + 1;
  }
  const std::size_t len = std::get<Bytes>(v).size();
  std::uint64_t total = 0;
  for (std::size_t l = 0; l <= len; ++l) {
    const std::uint64_t block = saturating_pow256(l);
    if (UINT64_MAX - total < block) return UINT64_MAX;
    total += block;
  }
  return total;
}

bool site_var_is_input(const Classification& c, const Program& p,
                       ValueType* type_out) {
  if (c.var.empty()) return false;
  for (const InputDecl& decl : p.inputs) {
    if (decl.name == c.var) {
      if (type_out) *type_out = decl.type;
      return true;
    }
  }
  return false;
}

}  // namespace

AttackReport attack_report(const Program& p,
                           const std::vector<Classification>& classifications,
                           const AttackBudgets& budgets) {
  std::vector<SourceSpan> spans;
  collect_site_spans(p.body, spans);
  if (spans.size() != classifications.size()) {
    throw ClassificationMismatch(
        "classification list has " + std::to_string(classifications.size()) +
        " entries but the program has " + std::to_string(spans.size()) +
        " conditionals");
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (!(spans[i] == classifications[i].site)) {
      throw ClassificationMismatch("classification " + std::to_string(i) +
                                   " does not match the program's conditional "
                                   "at that position");
    }
  }

  AttackReport report;
  report.seed = budgets.seed;
  for (std::size_t i = 0; i < classifications.size(); ++i) {
    const Classification& c = classifications[i];
    SiteAttack sa;
    sa.classification = c;

    ValueType var_type = ValueType::Int;
    const bool has_input_var = site_var_is_input(c, p, &var_type);
    const std::uint64_t site_seed = Rng::for_index(budgets.seed, i).next_u64();

    const bool must_resist = c.hardenable || c.already_hardened;
    if (must_resist) {
      if (!has_input_var) {
        sa.note = "no single input variable drives this site; not attacked";
        report.sites.push_back(std::move(sa));
        continue;
      }
      sa.attacked = true;
      ConditionalOracle oracle(p, i, c.var, budgets.seed);
      DictionarySpec spec;
      spec.type = var_type;
      spec.min_len = budgets.dict_min_len;
      spec.max_len = budgets.dict_max_len;
      if (auto it = budgets.planted.find(i); it != budgets.planted.end()) {
        spec.planted = it->second;
      }
      sa.outcomes.push_back(
          dictionary_attack(oracle, spec, budgets.dictionary, site_seed));
      const Enumerator en = var_type == ValueType::Int
                                ? int_enumerator()
                                : string_enumerator(budgets.dict_max_len);
      sa.outcomes.push_back(exhaustive_attack(oracle, en, budgets.exhaustive));
      sa.consistent = true;
      for (const AttackOutcome& out : sa.outcomes) {
        if (out.success) sa.consistent = false;
      }
      if (!sa.consistent) {
        sa.note = "classified hard to guess, yet an attack found a "
                  "satisfying input";
      }
    } else if (c.kind == SiteKind::RangeCheck) {
      if (!has_input_var || var_type != ValueType::Int) {
        sa.note = "threshold is not over a plain int input; not attacked";
        report.sites.push_back(std::move(sa));
        continue;
      }
      sa.attacked = true;
      sa.predicted_queries = 66;
      ConditionalOracle oracle(p, i, c.var, budgets.seed);
      AttackOutcome out = binary_search_attack(oracle);
      sa.consistent = out.success && out.queries <= sa.predicted_queries;
      if (!sa.consistent) {
        sa.note = "classified recoverable by binary search, but the attack "
                  "did not recover it";
      }
      sa.outcomes.push_back(std::move(out));
    } else if (c.kind == SiteKind::SmallGuessingDomain) {
      if (!has_input_var || c.constants.empty()) {
        sa.note = "no attackable variable or constant; not attacked";
        report.sites.push_back(std::move(sa));
        continue;
      }
      sa.attacked = true;
      std::uint64_t predicted = UINT64_MAX;
      std::size_t max_len = 0;
      for (const HashableValue& v : c.constants) {
        predicted = std::min(predicted, enumeration_bound(v));
        if (const auto* s = std::get_if<Bytes>(&v)) {
          max_len = std::max(max_len, s->size());
        }
      }
      sa.predicted_queries = predicted;
      ConditionalOracle oracle(p, i, c.var, budgets.seed);
      const Enumerator en = var_type == ValueType::Int
                                ? int_enumerator()
                                : string_enumerator(max_len);
      AttackOutcome out = exhaustive_attack(oracle, en, budgets.exhaustive);
      sa.consistent = out.success && out.queries <= sa.predicted_queries;
      if (!sa.consistent) {
        sa.note = "classified guessable, but exhaustive search did not crack "
                  "it within the predicted budget";
      }
      sa.outcomes.push_back(std::move(out));
    } else {
      sa.note = "no constant-comparison oracle for this shape; not attacked";
    }

    if (sa.attacked && !sa.consistent) report.pass = false;
    report.sites.push_back(std::move(sa));
  }
  return report;
}

}  // namespace pathharden
