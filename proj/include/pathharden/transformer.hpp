//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Rewrites hardenable conditionals into precomputed-digest comparisons and
// reports what was rewritten, what was skipped, and the residual
// false-positive bound.
#ifndef PATHHARDEN_TRANSFORMER_HPP
#define PATHHARDEN_TRANSFORMER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pathharden/ast.hpp"
#include "pathharden/classifier.hpp"
#include "pathharden/digest.hpp"
#include "pathharden/rng.hpp"

namespace pathharden {

enum class HardeningMode {
  // Refuse to emit output unless every conditional site is hardenable (or
  // already hardened); a shipped filter with one plaintext comparison left in
  // it hides nothing.
  Strict,
  // Rewrite what qualifies, keep the rest verbatim, say so in the report.
  BestEffort,
};

std::string_view mode_name(HardeningMode mode);

enum class RewriteRule { R1, R2, R3, None };

std::string_view rule_name(RewriteRule rule);

struct HardeningPolicy {
  ClassifierPolicy classifier;
  // Hash parameters for emitted digests. When random_salt is set the salt
  // field is ignored and a fresh 16-byte salt is drawn from the Rng passed
  // to harden_program.
  HashConfig hash;
  bool random_salt = false;
  HardeningMode mode = HardeningMode::Strict;
};

class StrictModeViolation : public Error {
 public:
  StrictModeViolation(const std::string& what, std::vector<Classification> sites)
      : Error(what), sites_(std::move(sites)) {}

  const std::vector<Classification>& sites() const { return sites_; }

 private:
  std::vector<Classification> sites_;
};

struct SiteReport {
  Classification classification;
  RewriteRule rule = RewriteRule::None;
  std::vector<Digest> digests;
  // Number of digest comparisons one evaluation of this site can perform.
  // For rule R3 the count depends on the haystack length: m_count is 0 and
  // fp_per_window is set; the per-evaluation count is len - window + 1.
  std::uint64_t m_count = 0;
  bool fp_per_window = false;
  std::uint64_t window_len = 0;  // R3 only
  std::string note;
};

struct HardeningReport {
  std::vector<SiteReport> sites;
  std::size_t hardened_count = 0;
  std::size_t skipped_count = 0;
  // Plaintext comparands removed from the program, in site order.
  std::vector<HashableValue> secrets_scrubbed;
  // The config actually used (salt resolved).
  HashConfig hash;
  HardeningMode mode = HardeningMode::Strict;
  // Best-effort leftovers worth flagging, e.g. a scrubbed secret that still
  // appears in a literal at a site that was not rewritten.
  std::vector<std::string> warnings;
};

struct HardeningResult {
  Program program;
  HardeningReport report;
};

// Rewrites every hardenable conditional of a valid program. Throws
// StrictModeViolation in strict mode when a site is not hardenable,
// ValidationFailure when p is invalid, and Error when a secret cannot be
// scrubbed from the output (a pinned salt whose digest text happens to
// contain the secret bytes). With a fixed salt the result is a pure function
// of (p, policy).
HardeningResult harden_program(const Program& p, const HardeningPolicy& policy,
                               Rng* salt_rng = nullptr);

// Total false-positive bound for one evaluation at the given haystack
// length: min(1, m_total * 2^-d).
double report_fp_bound(const HardeningReport& r, std::uint64_t input_len);

// Human-readable per-site verdicts plus totals at a reference input length.
std::string explain_report(const HardeningReport& r);

}  // namespace pathharden

#endif  // PATHHARDEN_TRANSFORMER_HPP
