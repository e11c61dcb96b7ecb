//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pathharden/printer.hpp"
#include "pathharden/validator.hpp"

namespace pathharden {

std::string_view mode_name(HardeningMode mode) {
  return mode == HardeningMode::Strict ? "strict" : "best-effort";
}

std::string_view rule_name(RewriteRule rule) {
  switch (rule) {
    case RewriteRule::R1: return "R1";
    case RewriteRule::R2: return "R2";
    case RewriteRule::R3: return "R3";
    case RewriteRule::None: return "none";
  }
  return "none";
}

namespace {

constexpr std::size_t kSaltAttempts = 8;
constexpr std::size_t kRandomSaltLen = 16;
// Text-level residue checks only fire for renderings at least this long;
// shorter ones collide with digest hex by chance far too often.
constexpr std::size_t kTextScrubMinLen = 8;

std::string span_text(const SourceSpan& s) {
  return "line " + std::to_string(s.line) + ", column " + std::to_string(s.column);
}

Digest digest_of(const HashableValue& v, const HashConfig& cfg) {
  return compute_digest(encode_value(v), cfg);
}

ExprPtr make_hash_eq(const std::string& var, const Digest& d, SourceSpan span) {
  HashEqCall call;
  call.value = make_expr(VarRef{var}, span);
  call.digest = d;
  return make_expr(std::move(call), span);
}

// Replaces each `v == lit` leaf of an or-tree with a digest comparison,
// keeping the tree shape and disjunct order.
void rewrite_disjuncts(ExprPtr& e, const std::string& var,
                       const HashConfig& cfg) {
  if (auto* o = std::get_if<LogicalOr>(&e->node)) {
    rewrite_disjuncts(o->lhs, var, cfg);
    rewrite_disjuncts(o->rhs, var, cfg);
    return;
  }
  auto& cmp = std::get<Cmp>(e->node);
  const Expr& lit_side =
      (std::holds_alternative<IntLit>(cmp.lhs->node) ||
       std::holds_alternative<StrLit>(cmp.lhs->node))
          ? *cmp.lhs
          : *cmp.rhs;
  HashableValue value;
  if (const auto* i = std::get_if<IntLit>(&lit_side.node)) {
    value = i->value;
  } else {
    value = std::get<StrLit>(lit_side.node).value;
  }
  e = make_hash_eq(var, digest_of(value, cfg), e->span);
}

struct RewriteState {
  const std::vector<Classification>* classifications = nullptr;
  std::size_t next = 0;
  const HashConfig* cfg = nullptr;
  HardeningReport* report = nullptr;
};

void rewrite_site(ExprPtr& cond, const Classification& c, const HashConfig& cfg,
                  SiteReport& sr) {
  switch (c.kind) {
    case SiteKind::PointEquality: {
      const Digest d = digest_of(c.constants.front(), cfg);
      cond = make_hash_eq(c.var, d, cond->span);
      sr.rule = RewriteRule::R1;
      sr.digests.push_back(d);
      sr.m_count = 1;
      break;
    }
    case SiteKind::SetMembership: {
      rewrite_disjuncts(cond, c.var, cfg);
      for (const HashableValue& v : c.constants) {
        sr.digests.push_back(digest_of(v, cfg));
      }
      sr.rule = RewriteRule::R2;
      sr.m_count = c.constants.size();
      break;
    }
    case SiteKind::SubstringMatch: {
      auto& call = std::get<ContainsCall>(cond->node);
      const Digest d = digest_of(HashableValue(c.needle), cfg);
      HashContainsCall hc;
      hc.haystack = std::move(call.haystack);
      hc.digest = d;
      hc.window_len = c.needle.size();
      const SourceSpan span = cond->span;
      cond = make_expr(std::move(hc), span);
      sr.rule = RewriteRule::R3;
      sr.digests.push_back(d);
      sr.fp_per_window = true;
      sr.window_len = c.needle.size();
      break;
    }
    default:
      break;
  }
}

void rewrite_block(Block& block, RewriteState& st) {
  for (StmtPtr& stmt : block) {
    auto* ifs = std::get_if<IfStmt>(&stmt->node);
    if (!ifs) continue;
    const Classification& c = (*st.classifications)[st.next++];
    SiteReport sr;
    sr.classification = c;
    if (c.hardenable) {
      rewrite_site(ifs->cond, c, *st.cfg, sr);
      st.report->hardened_count++;
      for (const HashableValue& v : c.constants) {
        auto& scrubbed = st.report->secrets_scrubbed;
        if (std::find(scrubbed.begin(), scrubbed.end(), v) == scrubbed.end()) {
          scrubbed.push_back(v);
        }
      }
    } else {
      sr.note = c.already_hardened ? "already hardened; left as is"
                                   : "skipped: " + c.reason;
      st.report->skipped_count++;
    }
    st.report->sites.push_back(std::move(sr));
    rewrite_block(ifs->then_block, st);
    if (ifs->else_block) rewrite_block(*ifs->else_block, st);
  }
}

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  std::visit(Overloaded{
                 [&](const Cmp& n) {
                   for_each_expr(*n.lhs, fn);
                   for_each_expr(*n.rhs, fn);
                 },
                 [&](const LogicalAnd& n) {
                   for_each_expr(*n.lhs, fn);
                   for_each_expr(*n.rhs, fn);
                 },
                 [&](const LogicalOr& n) {
                   for_each_expr(*n.lhs, fn);
                   for_each_expr(*n.rhs, fn);
                 },
                 [&](const LogicalNot& n) { for_each_expr(*n.operand, fn); },
                 [&](const ContainsCall& n) {
                   for_each_expr(*n.haystack, fn);
                   for_each_expr(*n.needle, fn);
                 },
                 [&](const LengthCall& n) { for_each_expr(*n.arg, fn); },
                 [&](const SubstringCall& n) {
                   for_each_expr(*n.str, fn);
                   for_each_expr(*n.start, fn);
                   for_each_expr(*n.len, fn);
                 },
                 [&](const HashEqCall& n) { for_each_expr(*n.value, fn); },
                 [&](const HashContainsCall& n) { for_each_expr(*n.haystack, fn); },
                 [](const auto&) {},
             },
             e.node);
}

void for_each_expr(const Block& b, const std::function<void(const Expr&)>& fn) {
  for (const StmtPtr& stmt : b) {
    std::visit(Overloaded{
                   [&](const LetStmt& s) { for_each_expr(*s.value, fn); },
                   [&](const IfStmt& s) {
                     for_each_expr(*s.cond, fn);
                     for_each_expr(s.then_block, fn);
                     if (s.else_block) for_each_expr(*s.else_block, fn);
                   },
                   [](const auto&) {},
               },
               stmt->node);
  }
}

std::string render_secret(const HashableValue& v) {
  if (const auto* i = std::get_if<std::uint64_t>(&v)) return std::to_string(*i);
  return std::get<Bytes>(v);
}

// True if any literal in the program still carries the secret: exact value
// for ints, byte containment for strings.
bool ast_residual(const Program& p, const HashableValue& secret) {
  bool found = false;
  for_each_expr(p.body, [&](const Expr& e) {
    if (found) return;
    if (const auto* i = std::get_if<std::uint64_t>(&secret)) {
      if (const auto* lit = std::get_if<IntLit>(&e.node)) {
        if (lit->value == *i) found = true;
      }
    } else {
      const Bytes& s = std::get<Bytes>(secret);
      if (const auto* lit = std::get_if<StrLit>(&e.node)) {
        if (!s.empty() && lit->value.find(s) != Bytes::npos) found = true;
      }
    }
  });
  return found;
}

}  // namespace

HardeningResult harden_program(const Program& p, const HardeningPolicy& policy,
                               Rng* salt_rng) {
  if (auto errors = validate(p); !errors.empty()) {
    throw ValidationFailure(std::move(errors));
  }
  if (auto bad = check_policy(policy.classifier)) throw Error(*bad);
  if (policy.random_salt && !salt_rng) {
    throw Error("random salt requested but no randomness source supplied");
  }

  const std::vector<Classification> classifications =
      scan_program(p, policy.classifier);

  if (policy.mode == HardeningMode::Strict) {
    std::vector<Classification> blockers;
    for (const Classification& c : classifications) {
      if (!c.hardenable && !c.already_hardened) blockers.push_back(c);
    }
    if (!blockers.empty()) {
      std::ostringstream msg;
      msg << "strict mode: " << blockers.size()
          << " conditional(s) cannot be hardened:";
      for (const Classification& c : blockers) {
        msg << "\n  " << span_text(c.site) << ": \"" << c.detail << "\" is "
            << site_kind_name(c.kind) << " (" << c.reason << ")";
      }
      throw StrictModeViolation(msg.str(), std::move(blockers));
    }
  }

  const std::size_t attempts = policy.random_salt ? kSaltAttempts : 1;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    HashConfig cfg = policy.hash;
    if (policy.random_salt) {
      const Bytes raw = salt_rng->bytes(kRandomSaltLen);
      cfg.salt.assign(raw.begin(), raw.end());
    }
    if (auto bad = check_config(cfg)) throw Error(*bad);

    HardeningResult result;
    result.program = clone(p);
    result.report.hash = cfg;
    result.report.mode = policy.mode;

    RewriteState st;
    st.classifications = &classifications;
    st.cfg = &cfg;
    st.report = &result.report;
    rewrite_block(result.program.body, st);

    bool salt_collision = false;
    const std::string printed = pretty_print(result.program);
    for (const HashableValue& secret : result.report.secrets_scrubbed) {
      if (ast_residual(result.program, secret)) {
        const std::string msg =
            "secret '" + render_secret(secret) +
            "' still appears in a literal outside the rewritten sites";
        if (policy.mode == HardeningMode::Strict) throw Error(msg);
        result.report.warnings.push_back(msg);
        continue;
      }
      const std::string rendering = render_secret(secret);
      if (rendering.size() >= kTextScrubMinLen &&
          printed.find(rendering) != std::string::npos) {
        salt_collision = true;
        break;
      }
    }
    if (!salt_collision) return result;
    if (!policy.random_salt) {
      throw Error(
          "digest text under the pinned salt contains a scrubbed secret; "
          "choose a different salt");
    }
  }
  throw Error("could not scrub all secrets after " +
              std::to_string(kSaltAttempts) + " salt attempts");
}

double report_fp_bound(const HardeningReport& r, std::uint64_t input_len) {
  std::uint64_t m_total = 0;
  for (const SiteReport& site : r.sites) {
    if (site.fp_per_window) {
      if (input_len >= site.window_len && site.window_len > 0) {
        m_total += input_len - site.window_len + 1;
      }
    } else {
      m_total += site.m_count;
    }
  }
  return fp_bound(m_total, r.hash.truncate_bits);
}

std::string explain_report(const HardeningReport& r) {
  std::ostringstream out;
  out << "hardening (" << mode_name(r.mode) << "): " << r.sites.size()
      << " sites, " << r.hardened_count << " hardened, " << r.skipped_count
      << " skipped\n";
  for (const SiteReport& site : r.sites) {
    const Classification& c = site.classification;
    out << "  " << span_text(c.site) << ": " << site_kind_name(c.kind);
    if (site.rule != RewriteRule::None) {
      out << ", rule " << rule_name(site.rule) << ", " << site.digests.size()
          << " digest(s)";
      if (site.rule == RewriteRule::R3) {
        out << ", window " << site.window_len;
      }
      out << ", guess cost " << c.guess_cost_bits << " bits";
    } else {
      out << ", " << site.note;
    }
    out << "\n";
  }
  constexpr std::uint64_t kReferenceLen = 256;
  out << "false-positive bound at input length " << kReferenceLen << ": "
      << report_fp_bound(r, kReferenceLen) << " (d=" << r.hash.truncate_bits
      << " bits)\n";
  out << "slowdown: R1/R2 hash the tested value once per comparison; R3 "
         "hashes every window of the haystack (linear in its length)\n";
  for (const std::string& w : r.warnings) {
    out << "warning: " << w << "\n";
  }
  return out.str();
}

}  // namespace pathharden
