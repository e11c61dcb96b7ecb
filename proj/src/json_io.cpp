//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/json_io.hpp"

#include "pathharden/printer.hpp"

namespace pathharden {

using nlohmann::json;

namespace {

// MiniLang escape syntax without the surrounding quotes.
std::string escape_bytes(const Bytes& bytes) {
  std::string quoted = format_string_literal(bytes);
  return quoted.substr(1, quoted.size() - 2);
}

json hashable_to_json(const HashableValue& v) {
  if (const auto* i = std::get_if<std::uint64_t>(&v)) return json(*i);
  return json(escape_bytes(std::get<Bytes>(v)));
}

json ratio_to_json(const std::optional<RatioStats>& r) {
  if (!r) return json(nullptr);
  return json{{"samples", r->samples},
              {"min", r->min},
              {"median", r->median},
              {"max", r->max}};
}

json digest_to_json(const Digest& d) { return json(format_digest(d)); }

json classification_to_json(const Classification& c) {
  json site{{"span", span_to_json(c.site)},
            {"kind", std::string(site_kind_name(c.kind))},
            {"detail", c.detail},
            {"guess_cost_bits", c.guess_cost_bits},
            {"hardenable", c.hardenable},
            {"reason", c.reason}};
  if (c.already_hardened) site["already_hardened"] = true;
  if (!c.var.empty()) site["var"] = c.var;
  if (!c.constants.empty()) {
    json consts = json::array();
    for (const HashableValue& v : c.constants) {
      consts.push_back(hashable_to_json(v));
    }
    site["constants"] = std::move(consts);
  }
  return site;
}

json outcome_to_json(const AttackOutcome& o) {
  json out{{"attacker", std::string(attacker_name(o.attacker))},
           {"success", o.success},
           {"queries", o.queries},
           {"budget", o.budget},
           {"seed", o.seed}};
  out["recovered"] = o.recovered ? value_to_json(*o.recovered) : json(nullptr);
  out["witness"] = o.witness ? value_to_json(*o.witness) : json(nullptr);
  if (!o.note.empty()) out["note"] = o.note;
  return out;
}

}  // namespace

json value_to_json(const Value& v) {
  return std::visit(Overloaded{
                        [](std::uint64_t i) { return json(i); },
                        [](const Bytes& s) { return json(escape_bytes(s)); },
                        [](bool b) { return json(b); },
                    },
                    v);
}

json span_to_json(const SourceSpan& s) {
  return json{{"line", s.line}, {"column", s.column}};
}

json to_json(const EvalResult& r) {
  return json{{"format_version", kFormatVersion},
              {"verdict", std::string(verdict_name(r.verdict))},
              {"cost",
               {{"steps", r.cost.steps},
                {"hash_invocations", r.cost.hash_invocations},
                {"bytes_hashed", r.cost.bytes_hashed}}}};
}

json to_json(const DivergenceReport& r) {
  json divergences = json::array();
  for (const Divergence& d : r.divergences) {
    json inputs = json::object();
    for (const auto& [name, value] : d.inputs) {
      inputs[name] = value_to_json(value);
    }
    divergences.push_back(json{{"trial", d.trial},
                               {"inputs", std::move(inputs)},
                               {"verdict_p", std::string(verdict_name(d.verdict_p))},
                               {"verdict_q", std::string(verdict_name(d.verdict_q))}});
  }
  return json{{"format_version", kFormatVersion},
              {"trials", r.trials},
              {"divergences", std::move(divergences)},
              {"cost_ratio",
               {{"steps", ratio_to_json(r.steps_ratio)},
                {"hash_invocations", ratio_to_json(r.hash_invocations_ratio)},
                {"bytes_hashed", ratio_to_json(r.bytes_hashed_ratio)}}}};
}

json to_json(const std::vector<Classification>& sites) {
  json arr = json::array();
  for (const Classification& c : sites) {
    arr.push_back(classification_to_json(c));
  }
  return json{{"format_version", kFormatVersion}, {"sites", std::move(arr)}};
}

json to_json(const HardeningReport& r) {
  json sites = json::array();
  for (const SiteReport& site : r.sites) {
    json entry{{"span", span_to_json(site.classification.site)},
               {"classification", classification_to_json(site.classification)},
               {"rule", std::string(rule_name(site.rule))}};
    json digests = json::array();
    for (const Digest& d : site.digests) digests.push_back(digest_to_json(d));
    entry["digests"] = std::move(digests);
    if (site.fp_per_window) {
      entry["fp_per_eval"] = {{"per_window", true},
                              {"window_len", site.window_len}};
    } else {
      entry["fp_per_eval"] = {{"per_window", false},
                              {"comparisons", site.m_count}};
    }
    if (!site.note.empty()) entry["note"] = site.note;
    sites.push_back(std::move(entry));
  }
  json scrubbed = json::array();
  for (const HashableValue& v : r.secrets_scrubbed) {
    scrubbed.push_back(hashable_to_json(v));
  }
  return json{{"format_version", kFormatVersion},
              {"mode", std::string(mode_name(r.mode))},
              {"hash",
               {{"salt", to_hex(r.hash.salt)},
                {"truncate_bits", r.hash.truncate_bits}}},
              {"sites", std::move(sites)},
              {"hardened", r.hardened_count},
              {"skipped", r.skipped_count},
              {"secrets_scrubbed", std::move(scrubbed)},
              {"fp_bound_at_len_256", report_fp_bound(r, 256)},
              {"warnings", r.warnings}};
}

json to_json(const AttackReport& r) {
  json sites = json::array();
  for (const SiteAttack& sa : r.sites) {
    json entry{{"classification", classification_to_json(sa.classification)},
               {"attacked", sa.attacked},
               {"consistent", sa.consistent}};
    if (sa.attacked) entry["predicted_queries"] = sa.predicted_queries;
    if (!sa.note.empty()) entry["note"] = sa.note;
    json outcomes = json::array();
    for (const AttackOutcome& o : sa.outcomes) {
      outcomes.push_back(outcome_to_json(o));
    }
    entry["outcomes"] = std::move(outcomes);
    sites.push_back(std::move(entry));
  }
  return json{{"format_version", kFormatVersion},
              {"seed", r.seed},
              {"verdict", r.pass ? "PASS" : "FAIL"},
              {"sites", std::move(sites)}};
}

json to_json(const std::vector<ValidationError>& errors) {
  json arr = json::array();
  for (const ValidationError& e : errors) {
    arr.push_back(json{{"code", std::string(validation_code_name(e.code))},
                       {"message", e.message},
                       {"span", span_to_json(e.span)}});
  }
  return json{{"format_version", kFormatVersion}, {"errors", std::move(arr)}};
}

}  // namespace pathharden
