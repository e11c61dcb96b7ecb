//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "pathharden/common.hpp"
#include "pathharden/printer.hpp"

namespace pathharden {

bool is_hardenable_kind(SiteKind kind) {
  switch (kind) {
    case SiteKind::PointEquality:
    case SiteKind::SetMembership:
    case SiteKind::SubstringMatch:
      return true;
    case SiteKind::RangeCheck:
    case SiteKind::SmallGuessingDomain:
    case SiteKind::NonConstantComparand:
    case SiteKind::Unsupported:
      return false;
  }
  return false;
}

std::string_view site_kind_name(SiteKind kind) {
  switch (kind) {
    case SiteKind::PointEquality: return "point-equality";
    case SiteKind::SetMembership: return "set-membership";
    case SiteKind::SubstringMatch: return "substring-match";
    case SiteKind::RangeCheck: return "range-check";
    case SiteKind::SmallGuessingDomain: return "small-guessing-domain";
    case SiteKind::NonConstantComparand: return "non-constant-comparand";
    case SiteKind::Unsupported: return "unsupported";
  }
  return "unsupported";
}

std::optional<std::string> check_policy(const ClassifierPolicy& policy) {
  if (policy.min_entropy_bits < 1.0) {
    return "min entropy threshold must be at least 1 bit";
  }
  if (policy.charset_bits_per_byte < 1.0 || policy.charset_bits_per_byte > 8.0) {
    return "charset bits per byte must lie in [1, 8]";
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kDetailLimit = 96;
// Queries for a binary search over the full u64 domain: log2(64) as an
// exponent figure.
constexpr double kRangeCheckBits = 6.0;

std::string make_detail(const Expr& e) {
  std::string text = print_expr(e);
  if (text.size() > kDetailLimit) {
    text.resize(kDetailLimit - 3);
    text += "...";
  }
  return text;
}

std::optional<HashableValue> literal_value(const Expr& e) {
  if (const auto* i = std::get_if<IntLit>(&e.node)) return HashableValue(i->value);
  if (const auto* s = std::get_if<StrLit>(&e.node)) return HashableValue(s->value);
  return std::nullopt;
}

const InputDecl* input_var(const Expr& e, const Program& program) {
  const auto* v = std::get_if<VarRef>(&e.node);
  if (!v) return nullptr;
  for (const InputDecl& decl : program.inputs) {
    if (decl.name == v->name) return &decl;
  }
  return nullptr;
}

bool is_var_ref(const Expr& e) { return std::holds_alternative<VarRef>(e.node); }

double literal_entropy(const HashableValue& v, const ClassifierPolicy& policy) {
  if (std::holds_alternative<std::uint64_t>(v)) return 64.0;
  return double(std::get<Bytes>(v).size()) * policy.charset_bits_per_byte;
}

void flatten_or(const Expr& e, std::vector<const Expr*>& out) {
  if (const auto* o = std::get_if<LogicalOr>(&e.node)) {
    flatten_or(*o->lhs, out);
    flatten_or(*o->rhs, out);
  } else {
    out.push_back(&e);
  }
}

void flatten_and(const Expr& e, std::vector<const Expr*>& out) {
  if (const auto* a = std::get_if<LogicalAnd>(&e.node)) {
    flatten_and(*a->lhs, out);
    flatten_and(*a->rhs, out);
  } else {
    out.push_back(&e);
  }
}

struct EqualityLeaf {
  const InputDecl* var = nullptr;
  HashableValue constant;
};

// Matches `v == lit` or `lit == v` where v names a declared input.
std::optional<EqualityLeaf> match_input_equality(const Expr& e,
                                                 const Program& program) {
  const auto* cmp = std::get_if<Cmp>(&e.node);
  if (!cmp || cmp->op != CmpOp::Eq) return std::nullopt;
  if (auto lit = literal_value(*cmp->rhs)) {
    if (const InputDecl* var = input_var(*cmp->lhs, program)) {
      return EqualityLeaf{var, *lit};
    }
  }
  if (auto lit = literal_value(*cmp->lhs)) {
    if (const InputDecl* var = input_var(*cmp->rhs, program)) {
      return EqualityLeaf{var, *lit};
    }
  }
  return std::nullopt;
}

bool is_hash_call(const Expr& e) {
  return std::holds_alternative<HashEqCall>(e.node) ||
         std::holds_alternative<HashContainsCall>(e.node);
}

unsigned hash_call_bits(const Expr& e) {
  if (const auto* h = std::get_if<HashEqCall>(&e.node)) {
    return h->digest.config.truncate_bits;
  }
  return std::get<HashContainsCall>(e.node).digest.config.truncate_bits;
}

// Names the unique declared input mentioned by the expression, if there is
// exactly one.
void collect_inputs(const Expr& e, const Program& program,
                    std::vector<const InputDecl*>& out) {
  std::visit(Overloaded{
                 [&](const VarRef&) {
                   if (const InputDecl* d = input_var(e, program)) {
                     if (std::find(out.begin(), out.end(), d) == out.end()) {
                       out.push_back(d);
                     }
                   }
                 },
                 [&](const Cmp& n) {
                   collect_inputs(*n.lhs, program, out);
                   collect_inputs(*n.rhs, program, out);
                 },
                 [&](const LogicalAnd& n) {
                   collect_inputs(*n.lhs, program, out);
                   collect_inputs(*n.rhs, program, out);
                 },
                 [&](const LogicalOr& n) {
                   collect_inputs(*n.lhs, program, out);
                   collect_inputs(*n.rhs, program, out);
                 },
                 [&](const LogicalNot& n) { collect_inputs(*n.operand, program, out); },
                 [&](const ContainsCall& n) {
                   collect_inputs(*n.haystack, program, out);
                   collect_inputs(*n.needle, program, out);
                 },
                 [&](const LengthCall& n) { collect_inputs(*n.arg, program, out); },
                 [&](const SubstringCall& n) {
                   collect_inputs(*n.str, program, out);
                   collect_inputs(*n.start, program, out);
                   collect_inputs(*n.len, program, out);
                 },
                 [&](const HashEqCall& n) { collect_inputs(*n.value, program, out); },
                 [&](const HashContainsCall& n) {
                   collect_inputs(*n.haystack, program, out);
                 },
                 [](const IntLit&) {},
                 [](const StrLit&) {},
             },
             e.node);
}

Classification base_classification(const Expr& cond) {
  Classification c;
  c.site = cond.span;
  c.detail = make_detail(cond);
  return c;
}

Classification not_hardenable(const Expr& cond, SiteKind kind,
                              std::string reason) {
  Classification c = base_classification(cond);
  c.kind = kind;
  c.hardenable = false;
  c.reason = std::move(reason);
  return c;
}

Classification classify_comparison(const Expr& cond, const Cmp& cmp,
                                   const Program& program,
                                   const ClassifierPolicy& policy) {
  const auto lhs_lit = literal_value(*cmp.lhs);
  const auto rhs_lit = literal_value(*cmp.rhs);
  if (lhs_lit && rhs_lit) {
    return not_hardenable(cond, SiteKind::Unsupported,
                          "both comparands are literals; nothing to hide");
  }
  if (!lhs_lit && !rhs_lit) {
    return not_hardenable(cond, SiteKind::NonConstantComparand,
                          "neither comparand is a literal");
  }
  const Expr& other = lhs_lit ? *cmp.rhs : *cmp.lhs;
  const HashableValue constant = lhs_lit ? *lhs_lit : *rhs_lit;

  if (is_order_op(cmp.op)) {
    Classification c = base_classification(cond);
    c.kind = SiteKind::RangeCheck;
    c.hardenable = false;
    c.guess_cost_bits = kRangeCheckBits;
    c.constants.push_back(constant);
    c.reason = "the threshold is recoverable by binary search";
    if (const InputDecl* var = input_var(other, program)) {
      c.var = var->name;
      c.var_type = var->type;
    }
    return c;
  }
  if (cmp.op == CmpOp::Ne) {
    return not_hardenable(cond, SiteKind::Unsupported,
                          "inequality has abundant satisfying assignments; "
                          "hardening it hides nothing worth hiding");
  }

  const InputDecl* var = input_var(other, program);
  if (!var) {
    if (is_var_ref(other)) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "comparand is a derived variable, not a declared "
                            "input");
    }
    return not_hardenable(cond, SiteKind::Unsupported,
                          "comparand is not a plain input variable");
  }

  const double entropy = literal_entropy(constant, policy);
  Classification c = base_classification(cond);
  c.var = var->name;
  c.var_type = var->type;
  c.constants.push_back(constant);
  c.guess_cost_bits = entropy;
  if (entropy >= policy.min_entropy_bits) {
    c.kind = SiteKind::PointEquality;
    c.hardenable = true;
  } else {
    c.kind = SiteKind::SmallGuessingDomain;
    c.hardenable = false;
    c.reason = "comparand entropy " + std::to_string(entropy) +
               " bits is below the threshold";
  }
  return c;
}

Classification classify_disjunction(const Expr& cond, const Program& program,
                                    const ClassifierPolicy& policy) {
  std::vector<const Expr*> leaves;
  flatten_or(cond, leaves);

  bool all_hash = true;
  unsigned min_bits = 256;
  for (const Expr* leaf : leaves) {
    if (!is_hash_call(*leaf)) {
      all_hash = false;
      break;
    }
    min_bits = std::min(min_bits, hash_call_bits(*leaf));
  }
  if (all_hash) {
    Classification c = not_hardenable(
        cond, SiteKind::Unsupported,
        "condition already compares digests; left as is");
    c.already_hardened = true;
    c.guess_cost_bits = double(min_bits);
    return c;
  }

  const InputDecl* var = nullptr;
  std::vector<HashableValue> members;
  for (const Expr* leaf : leaves) {
    auto eq = match_input_equality(*leaf, program);
    if (!eq) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "disjunction mixes structures beyond equalities "
                            "on one input");
    }
    if (var && eq->var != var) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "disjunction tests more than one variable");
    }
    var = eq->var;
    if (std::find(members.begin(), members.end(), eq->constant) ==
        members.end()) {
      members.push_back(eq->constant);
    }
  }

  double min_entropy = literal_entropy(members.front(), policy);
  for (const HashableValue& m : members) {
    min_entropy = std::min(min_entropy, literal_entropy(m, policy));
  }
  const double cost = min_entropy - std::log2(double(members.size()));

  Classification c = base_classification(cond);
  c.var = var->name;
  c.var_type = var->type;
  c.constants = std::move(members);
  c.guess_cost_bits = cost;
  if (min_entropy >= policy.min_entropy_bits) {
    c.kind = SiteKind::SetMembership;
    c.hardenable = true;
  } else {
    c.kind = SiteKind::SmallGuessingDomain;
    c.hardenable = false;
    c.reason = "weakest member entropy " + std::to_string(min_entropy) +
               " bits is below the threshold";
  }
  return c;
}

Classification classify_interval(const Expr& cond, const Program& program,
                                 const ClassifierPolicy& policy) {
  std::vector<const Expr*> leaves;
  flatten_and(cond, leaves);
  const InputDecl* var = nullptr;
  for (const Expr* leaf : leaves) {
    const auto* cmp = std::get_if<Cmp>(&leaf->node);
    if (!cmp || !is_order_op(cmp->op)) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "conjunction mixes a comparison with other "
                            "structure; not rewritten");
    }
    const auto lhs_lit = literal_value(*cmp->lhs);
    const auto rhs_lit = literal_value(*cmp->rhs);
    if (bool(lhs_lit) == bool(rhs_lit)) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "conjunction is not an interval over one input");
    }
    const InputDecl* leaf_var =
        input_var(lhs_lit ? *cmp->rhs : *cmp->lhs, program);
    if (!leaf_var || (var && leaf_var != var)) {
      return not_hardenable(cond, SiteKind::Unsupported,
                            "conjunction is not an interval over one input");
    }
    var = leaf_var;
  }
  Classification c = base_classification(cond);
  c.kind = SiteKind::RangeCheck;
  c.hardenable = false;
  c.guess_cost_bits = kRangeCheckBits;
  c.var = var->name;
  c.var_type = var->type;
  c.reason = "interval bounds are recoverable by binary search";
  (void)policy;
  return c;
}

}  // namespace

Classification classify_conditional(const Expr& cond, const Program& program,
                                    const ClassifierPolicy& policy) {
  if (auto bad = check_policy(policy)) throw Error(*bad);

  return std::visit(
      Overloaded{
          [&](const Cmp& n) { return classify_comparison(cond, n, program, policy); },
          [&](const LogicalOr&) { return classify_disjunction(cond, program, policy); },
          [&](const LogicalAnd&) { return classify_interval(cond, program, policy); },
          [&](const LogicalNot&) {
            return not_hardenable(cond, SiteKind::Unsupported,
                                  "negated conditions are not rewritten; the "
                                  "complement of a hidden set is easy to hit");
          },
          [&](const ContainsCall& n) {
            const auto* needle = std::get_if<StrLit>(&n.needle->node);
            if (!needle) {
              return not_hardenable(cond, SiteKind::NonConstantComparand,
                                    "needle is not a literal");
            }
            Classification c = base_classification(cond);
            c.needle = needle->value;
            c.has_needle = true;
            c.constants.push_back(HashableValue(needle->value));
            const double entropy =
                double(needle->value.size()) * policy.charset_bits_per_byte;
            c.guess_cost_bits = entropy;
            std::vector<const InputDecl*> inputs;
            collect_inputs(*n.haystack, program, inputs);
            if (inputs.size() == 1 && inputs.front()->type == ValueType::String) {
              c.var = inputs.front()->name;
              c.var_type = ValueType::String;
            }
            if (needle->value.size() >= policy.min_needle_len &&
                entropy >= policy.min_entropy_bits) {
              c.kind = SiteKind::SubstringMatch;
              c.hardenable = true;
            } else {
              c.kind = SiteKind::SmallGuessingDomain;
              c.hardenable = false;
              c.reason = "a " + std::to_string(needle->value.size()) +
                         "-byte needle is found by searching a small set of "
                         "candidate strings";
            }
            return c;
          },
          [&](const HashEqCall& n) {
            Classification c = not_hardenable(
                cond, SiteKind::Unsupported,
                "condition already compares digests; left as is");
            c.already_hardened = true;
            c.guess_cost_bits = double(n.digest.config.truncate_bits);
            std::vector<const InputDecl*> inputs;
            collect_inputs(*n.value, program, inputs);
            if (inputs.size() == 1) {
              c.var = inputs.front()->name;
              c.var_type = inputs.front()->type;
            }
            return c;
          },
          [&](const HashContainsCall& n) {
            Classification c = not_hardenable(
                cond, SiteKind::Unsupported,
                "condition already compares digests; left as is");
            c.already_hardened = true;
            c.guess_cost_bits = double(n.digest.config.truncate_bits);
            std::vector<const InputDecl*> inputs;
            collect_inputs(*n.haystack, program, inputs);
            if (inputs.size() == 1 && inputs.front()->type == ValueType::String) {
              c.var = inputs.front()->name;
              c.var_type = ValueType::String;
            }
            return c;
          },
          [&](const VarRef&) {
            return not_hardenable(cond, SiteKind::Unsupported,
                                  "condition is a bare variable, not a "
                                  "comparison against a constant");
          },
          [&](const auto&) {
            return not_hardenable(cond, SiteKind::Unsupported,
                                  "condition shape is not recognized");
          },
      },
      cond.node);
}

namespace {

void scan_block(const Block& block, const Program& p,
                const ClassifierPolicy& policy,
                std::vector<Classification>& out) {
  for (const StmtPtr& stmt : block) {
    if (const auto* ifs = std::get_if<IfStmt>(&stmt->node)) {
      out.push_back(classify_conditional(*ifs->cond, p, policy));
      scan_block(ifs->then_block, p, policy, out);
      if (ifs->else_block) scan_block(*ifs->else_block, p, policy, out);
    }
  }
}

}  // namespace

std::vector<Classification> scan_program(const Program& p,
                                         const ClassifierPolicy& policy) {
  std::vector<Classification> out;
  scan_block(p.body, p, policy, out);
  return out;
}

double estimate_guess_cost(const Classification& c) { return c.guess_cost_bits; }

}  // namespace pathharden
