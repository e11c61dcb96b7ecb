//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "pathharden/parser.hpp"
#include "pathharden/printer.hpp"
#include "pathharden/rng.hpp"
#include "pathharden/transformer.hpp"
#include "pathharden/validator.hpp"

using namespace pathharden;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

HardeningPolicy zero_salt_policy() {
  HardeningPolicy policy;
  policy.hash.salt.assign(16, 0x00);
  return policy;
}

}  // namespace

TEST_CASE("point equality becomes one digest comparison") {
  Program p = load_program(
      "input x: int; if (x == 13846719402597620583) { reject; } accept;");
  HardeningResult r = harden_program(p, zero_salt_policy());

  CHECK(pretty_print(r.program) ==
        "input x: int;\n"
        "if (hash_eq(x, digest\"sha256/s00000000000000000000000000000000:"
        "eb7884557fedd97228ff1a0ba7035f005d0f489bdb5edf33c2688f69e98c9630\")) "
        "{\n"
        "  reject;\n"
        "}\n"
        "accept;\n");

  CHECK(r.report.hardened_count == 1);
  CHECK(r.report.skipped_count == 0);
  REQUIRE(r.report.sites.size() == 1);
  CHECK(r.report.sites[0].rule == RewriteRule::R1);
  CHECK(r.report.sites[0].m_count == 1);
  REQUIRE(r.report.secrets_scrubbed.size() == 1);
  CHECK(std::get<std::uint64_t>(r.report.secrets_scrubbed[0]) ==
        13846719402597620583ull);
}

TEST_CASE("string point equality uses the string encoding") {
  Program p = load_program(
      "input token: string;"
      "if (token == \"qv7#Kp2@wL9!xZ4$\") { reject; } accept;");
  HardeningResult r = harden_program(p, zero_salt_policy());
  std::string printed = pretty_print(r.program);
  CHECK(printed.find(
            "8543664dfe18c08fd46e3341b337092626bd8afb08ae10e181397b2164b7f768") !=
        std::string::npos);
  CHECK(printed.find("qv7#Kp2@wL9!xZ4$") == std::string::npos);
}

TEST_CASE("set membership becomes a disjunction in member order") {
  Program p = load_program(
      "input x: int;"
      "if (x == 17746362918412765039 || x == 6443762150761588725 ||"
      "    x == 11353154945887610283) { reject; }"
      "accept;");
  HardeningResult r = harden_program(p, zero_salt_policy());

  std::string printed = pretty_print(r.program);
  auto pos_a = printed.find(
      "320126058c147fc11b6bebd4514f4f5035ea289beeaa429ed0531879b43564cd");
  auto pos_b = printed.find(
      "2da22d1b6400fab21ae97403ed64b18ba5f1ce50cdf657478073134a437ad693");
  auto pos_c = printed.find(
      "4619835db6eb8fa8da89a71888824b415ec24a9372992db7751a472cc86d46b1");
  REQUIRE(pos_a != std::string::npos);
  REQUIRE(pos_b != std::string::npos);
  REQUIRE(pos_c != std::string::npos);
  // The rewritten disjuncts keep their source order.
  CHECK(pos_a < pos_b);
  CHECK(pos_b < pos_c);

  REQUIRE(r.report.sites.size() == 1);
  CHECK(r.report.sites[0].rule == RewriteRule::R2);
  CHECK(r.report.sites[0].m_count == 3);
  CHECK(r.report.sites[0].digests.size() == 3);
  CHECK(r.report.secrets_scrubbed.size() == 3);

  // Still three hash_eq calls joined by ||.
  std::size_t calls = 0;
  for (std::size_t at = printed.find("hash_eq"); at != std::string::npos;
       at = printed.find("hash_eq", at + 1)) {
    ++calls;
  }
  CHECK(calls == 3);
}

TEST_CASE("substring match becomes hash_contains with the needle length") {
  Program p = load_program(read_file(std::string(PATHHARDEN_SOURCE_DIR) +
                                     "/corpus/php_filter.ml1"));
  HardeningResult r = harden_program(p, zero_salt_policy());
  CHECK(pretty_print(r.program) ==
        read_file(std::string(PATHHARDEN_SOURCE_DIR) +
                  "/tests/golden/php_filter_hardened.ml1"));

  REQUIRE(r.report.sites.size() == 1);
  CHECK(r.report.sites[0].rule == RewriteRule::R3);
  CHECK(r.report.sites[0].window_len == 16);
  CHECK(r.report.sites[0].fp_per_window);
  CHECK(r.report.sites[0].m_count == 0);
}

TEST_CASE("strict mode refuses programs with unhardenable sites") {
  Program p = load_program("input x: int; if (x < 1000) { reject; } accept;");
  try {
    harden_program(p, zero_salt_policy());
    FAIL("expected StrictModeViolation");
  } catch (const StrictModeViolation& v) {
    REQUIRE(v.sites().size() == 1);
    CHECK(v.sites()[0].kind == SiteKind::RangeCheck);
    CHECK(std::string(v.what()).find("strict mode") != std::string::npos);
    CHECK(std::string(v.what()).find("x < 1000") != std::string::npos);
  }
}

TEST_CASE("best effort rewrites what it can and keeps the rest") {
  Program p = load_program(
      "input x: int;"
      "if (x == 13846719402597620583) { reject; }"
      "if (x < 1000) { reject; }"
      "accept;");
  HardeningPolicy policy = zero_salt_policy();
  policy.mode = HardeningMode::BestEffort;
  HardeningResult r = harden_program(p, policy);

  std::string printed = pretty_print(r.program);
  CHECK(printed.find("hash_eq") != std::string::npos);
  CHECK(printed.find("x < 1000") != std::string::npos);
  CHECK(printed.find("13846719402597620583") == std::string::npos);
  CHECK(r.report.hardened_count == 1);
  CHECK(r.report.skipped_count == 1);
  CHECK(r.report.sites[1].rule == RewriteRule::None);
  CHECK(!r.report.sites[1].note.empty());
}

TEST_CASE("a scrubbed secret may not survive elsewhere in the output") {
  // The secret reappears in an unrelated let; the single rewrite cannot
  // remove that copy.
  const char* src =
      "input x: int;"
      "let probe = 13846719402597620583;"
      "if (x == 13846719402597620583) { reject; }"
      "accept;";
  Program p = load_program(src);
  CHECK_THROWS_AS(harden_program(p, zero_salt_policy()), Error);

  HardeningPolicy relaxed = zero_salt_policy();
  relaxed.mode = HardeningMode::BestEffort;
  HardeningResult r = harden_program(p, relaxed);
  REQUIRE(r.report.warnings.size() == 1);
  CHECK(r.report.warnings[0].find("literal") != std::string::npos);
  // The site itself was still rewritten.
  CHECK(r.report.hardened_count == 1);
}

TEST_CASE("string secrets are scrubbed even as substrings of literals") {
  const char* src =
      "input s: string;"
      "let banner = \"key qv7#Kp2@wL9!xZ4$ leaked\";"
      "if (s == \"qv7#Kp2@wL9!xZ4$\") { reject; }"
      "accept;";
  Program p = load_program(src);
  CHECK_THROWS_AS(harden_program(p, zero_salt_policy()), Error);
}

TEST_CASE("re-hardening a hardened program changes nothing") {
  Program p = load_program(read_file(std::string(PATHHARDEN_SOURCE_DIR) +
                                     "/corpus/php_filter.ml1"));
  HardeningResult once = harden_program(p, zero_salt_policy());
  std::string first = pretty_print(once.program);

  HardeningResult twice = harden_program(once.program, zero_salt_policy());
  CHECK(pretty_print(twice.program) == first);
  CHECK(twice.report.hardened_count == 0);
  CHECK(twice.report.skipped_count == 1);
  CHECK(twice.report.sites[0].note.find("already hardened") !=
        std::string::npos);
  CHECK(twice.report.secrets_scrubbed.empty());
}

TEST_CASE("hardening is deterministic under a pinned salt") {
  Program p = load_program(
      "input x: int; if (x == 13846719402597620583) { reject; } accept;");
  HardeningPolicy policy = zero_salt_policy();
  policy.hash.truncate_bits = 64;
  std::string a = pretty_print(harden_program(p, policy).program);
  std::string b = pretty_print(harden_program(p, policy).program);
  CHECK(a == b);
}

TEST_CASE("random salts come from the provided stream") {
  Program p = load_program(
      "input x: int; if (x == 13846719402597620583) { reject; } accept;");
  HardeningPolicy policy;
  policy.random_salt = true;

  Rng rng_a(123);
  HardeningResult a = harden_program(p, policy, &rng_a);
  CHECK(a.report.hash.salt.size() == 16);

  // Same seed, same salt; different seed, different salt.
  Rng rng_b(123);
  HardeningResult b = harden_program(p, policy, &rng_b);
  CHECK(b.report.hash.salt == a.report.hash.salt);
  Rng rng_c(124);
  HardeningResult c = harden_program(p, policy, &rng_c);
  CHECK(c.report.hash.salt != a.report.hash.salt);

  // The digest text reflects the salt.
  CHECK(pretty_print(a.program) != pretty_print(c.program));
}

TEST_CASE("truncated digests carry their width into the emitted text") {
  Program p = load_program(
      "input x: int; if (x == 13846719402597620583) { reject; } accept;");
  HardeningPolicy policy = zero_salt_policy();
  policy.hash.truncate_bits = 32;
  HardeningResult r = harden_program(p, policy);
  std::string printed = pretty_print(r.program);
  CHECK(printed.find("/t32") != std::string::npos);
  // eb788455 is the leading 32 bits of the full digest.
  CHECK(printed.find(":eb788455\"") != std::string::npos);
}

TEST_CASE("fp bound totals per-evaluation comparisons") {
  // One R1 site (1 comparison) and one R3 site (len - 16 + 1 windows).
  Program p = load_program(
      "input x: int; input req: string;"
      "if (x == 13846719402597620583) { reject; }"
      "if (contains(req, \"2250738585072011\")) { reject; }"
      "accept;");
  HardeningPolicy policy = zero_salt_policy();
  policy.hash.truncate_bits = 8;
  HardeningResult r = harden_program(p, policy);

  // At length 256: 1 + 241 comparisons at 2^-8 each.
  CHECK(report_fp_bound(r.report, 256) == doctest::Approx(242.0 / 256.0));
  // At length 16: 1 + 1.
  CHECK(report_fp_bound(r.report, 16) == doctest::Approx(2.0 / 256.0));
  // Haystacks shorter than the window contribute nothing.
  CHECK(report_fp_bound(r.report, 0) == doctest::Approx(1.0 / 256.0));
  // The bound saturates at 1.
  CHECK(report_fp_bound(r.report, 2000000) == 1.0);

  HardeningPolicy wide = zero_salt_policy();
  HardeningResult full = harden_program(p, wide);
  CHECK(report_fp_bound(full.report, 256) < 1e-60);
}

TEST_CASE("explain_report names rules and totals") {
  Program p = load_program(read_file(std::string(PATHHARDEN_SOURCE_DIR) +
                                     "/corpus/php_filter.ml1"));
  HardeningResult r = harden_program(p, zero_salt_policy());
  std::string text = explain_report(r.report);
  CHECK(text.find("R3") != std::string::npos);
  CHECK(text.find("1 hardened") != std::string::npos);
}

TEST_CASE("invalid programs are rejected before any rewriting") {
  Program p = parse("if (y == 1) { reject; } accept;");
  CHECK_THROWS_AS(harden_program(p, zero_salt_policy()), ValidationFailure);
}
