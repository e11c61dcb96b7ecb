//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include <doctest.h>

#include <string>

#include "pathharden/digest.hpp"
#include "pathharden/interpreter.hpp"
#include "pathharden/parser.hpp"

using namespace pathharden;

namespace {

EvalResult run(std::string_view src, const InputBinding& binding) {
  return evaluate(load_program(src), binding);
}

}  // namespace

TEST_CASE("verdicts") {
  const char* src = "input x: int; if (x == 7) { reject; } accept;";
  CHECK(run(src, {{"x", Value{std::uint64_t{7}}}}).verdict == Verdict::Reject);
  CHECK(run(src, {{"x", Value{std::uint64_t{8}}}}).verdict == Verdict::Accept);
}

TEST_CASE("else branch and nesting") {
  const char* src =
      "input x: int;"
      "if (x < 10) { if (x < 5) { reject; } else { accept; } }"
      "reject;";
  CHECK(run(src, {{"x", Value{std::uint64_t{3}}}}).verdict == Verdict::Reject);
  CHECK(run(src, {{"x", Value{std::uint64_t{7}}}}).verdict == Verdict::Accept);
  CHECK(run(src, {{"x", Value{std::uint64_t{12}}}}).verdict == Verdict::Reject);
}

TEST_CASE("falling off the end accepts") {
  CHECK(run("input x: int;", {{"x", Value{std::uint64_t{1}}}}).verdict ==
        Verdict::Accept);
  CHECK(run("input x: int; if (x == 1) { reject; }",
            {{"x", Value{std::uint64_t{2}}}})
            .verdict == Verdict::Accept);
}

TEST_CASE("a taken branch with no verdict falls through") {
  const char* src =
      "input x: int;"
      "if (x == 1) { let y = 2; }"
      "if (x == 1) { reject; }"
      "accept;";
  CHECK(run(src, {{"x", Value{std::uint64_t{1}}}}).verdict == Verdict::Reject);
}

TEST_CASE("lets bind and builtins compute") {
  const char* src =
      "input s: string;"
      "let n = length(s);"
      "let mid = substring(s, 1, 2);"
      "if (n == 4 && mid == \"bc\") { reject; }"
      "accept;";
  CHECK(run(src, {{"s", Value{Bytes("abcd")}}}).verdict == Verdict::Reject);
  CHECK(run(src, {{"s", Value{Bytes("axxd")}}}).verdict == Verdict::Accept);
  CHECK(run(src, {{"s", Value{Bytes("ab")}}}).verdict == Verdict::Accept);
}

TEST_CASE("substring out of range yields the empty string") {
  const char* src =
      "input s: string;"
      "if (substring(s, 3, 2) == \"\") { reject; }"
      "accept;";
  // "abcd": start 3, len 2 runs past the end, so the call yields "".
  CHECK(run(src, {{"s", Value{Bytes("abcd")}}}).verdict == Verdict::Reject);
  // "abcde" has a real 2-byte substring at 3.
  CHECK(run(src, {{"s", Value{Bytes("abcde")}}}).verdict == Verdict::Accept);
  // Start exactly at the end with zero length is in range: "".
  CHECK(run("input s: string; if (substring(s, 4, 0) == \"\") { reject; } accept;",
            {{"s", Value{Bytes("abcd")}}})
            .verdict == Verdict::Reject);
  // Start past the end is out of range for any length.
  CHECK(run("input s: string; if (substring(s, 5, 0) == \"\") { reject; } accept;",
            {{"s", Value{Bytes("abcd")}}})
            .verdict == Verdict::Reject);
}

TEST_CASE("contains on raw bytes") {
  const char* src =
      "input s: string; if (contains(s, \"\\x00\\xff\")) { reject; } accept;";
  CHECK(run(src, {{"s", Value{Bytes("a\x00\xff" "b", 4)}}}).verdict ==
        Verdict::Reject);
  CHECK(run(src, {{"s", Value{Bytes("ab")}}}).verdict == Verdict::Accept);
  // Needle longer than haystack never matches.
  CHECK(run(src, {{"s", Value{Bytes("\x00", 1)}}}).verdict == Verdict::Accept);
  // Empty needle matches everything.
  CHECK(run("input s: string; if (contains(s, \"\")) { reject; } accept;",
            {{"s", Value{Bytes("")}}})
            .verdict == Verdict::Reject);
}

TEST_CASE("step counts follow the documented model") {
  // One statement costs 1 step, one expression node costs 1 step, contains
  // adds one step per probed position.
  const char* src = "input x: int; if (x == 7) { reject; } accept;";
  // if(1) + cmp(1) + var(1) + lit(1) + reject(1)
  CHECK(run(src, {{"x", Value{std::uint64_t{7}}}}).cost.steps == 5);
  // if(1) + cmp(3) + accept(1)
  CHECK(run(src, {{"x", Value{std::uint64_t{8}}}}).cost.steps == 5);

  const char* contains_src =
      "input s: string; if (contains(s, \"ab\")) { reject; } accept;";
  // if(1) + contains(1) + var(1) + lit(1) + 3 positions + reject(1)
  EvalResult hit = run(contains_src, {{"s", Value{Bytes("zzab")}}});
  CHECK(hit.verdict == Verdict::Reject);
  CHECK(hit.cost.steps == 8);
  // Same shape, no match, then accept instead of reject.
  EvalResult miss = run(contains_src, {{"s", Value{Bytes("zzzz")}}});
  CHECK(miss.cost.steps == 8);
  // Haystack shorter than the needle probes nothing.
  EvalResult tiny = run(contains_src, {{"s", Value{Bytes("a")}}});
  CHECK(tiny.cost.steps == 5);

  // substring adds one step per copied byte, nothing when out of range.
  EvalResult sub = run("input s: string; let t = substring(s, 1, 2); accept;",
                       {{"s", Value{Bytes("abcd")}}});
  // let(1) + substring(1) + var(1) + lit(1) + lit(1) + 2 bytes + accept(1)
  CHECK(sub.cost.steps == 8);
  EvalResult oob = run("input s: string; let t = substring(s, 3, 2); accept;",
                       {{"s", Value{Bytes("abcd")}}});
  CHECK(oob.cost.steps == 6);
}

TEST_CASE("plain programs hash nothing") {
  EvalResult r = run(
      "input s: string; if (contains(s, \"needle\")) { reject; } accept;",
      {{"s", Value{Bytes(std::string(100, 'x'))}}});
  CHECK(r.cost.hash_invocations == 0);
  CHECK(r.cost.bytes_hashed == 0);
}

TEST_CASE("hash_eq cost: one invocation, salt plus encoding") {
  HashConfig cfg;
  cfg.salt = {0x00, 0x00};
  Digest d = compute_digest(encode_value(HashableValue{std::uint64_t{7}}), cfg);
  std::string src = "input x: int; if (hash_eq(x, digest\"" +
                    format_digest(d) + "\")) { reject; } accept;";
  EvalResult r = run(src, {{"x", Value{std::uint64_t{7}}}});
  CHECK(r.verdict == Verdict::Reject);
  // if(1) + hash_eq(1) + var(1) + reject(1)
  CHECK(r.cost.steps == 4);
  CHECK(r.cost.hash_invocations == 1);
  // 2 salt bytes + 9 encoded bytes (tag + 8-byte integer)
  CHECK(r.cost.bytes_hashed == 11);

  // A miss costs exactly the same: the comparison is not data-dependent.
  EvalResult miss = run(src, {{"x", Value{std::uint64_t{8}}}});
  CHECK(miss.verdict == Verdict::Accept);
  CHECK(miss.cost.hash_invocations == 1);
  CHECK(miss.cost.bytes_hashed == 11);
}

TEST_CASE("hash_contains cost: per window") {
  HashConfig cfg;
  cfg.salt = {0xaa};
  Digest d = compute_digest(encode_value(HashableValue{Bytes("ab")}), cfg);
  std::string src = "input s: string; if (hash_contains(s, digest\"" +
                    format_digest(d) + "\", 2)) { reject; } accept;";
  // "zzab" has windows zz, za, ab; the scan stops on the hit.
  EvalResult r = run(src, {{"s", Value{Bytes("zzab")}}});
  CHECK(r.verdict == Verdict::Reject);
  CHECK(r.cost.hash_invocations == 3);
  // 3 windows x (1 salt + 1 tag + 2 window bytes)
  CHECK(r.cost.bytes_hashed == 12);
  // if(1) + hash_contains(1) + var(1) + 3 windows + reject(1)
  CHECK(r.cost.steps == 7);

  // Miss scans every window: len 5 -> 4 windows.
  EvalResult miss = run(src, {{"s", Value{Bytes("zzzzz")}}});
  CHECK(miss.verdict == Verdict::Accept);
  CHECK(miss.cost.hash_invocations == 4);
  CHECK(miss.cost.bytes_hashed == 16);
}

TEST_CASE("short-circuit skips the right-hand side") {
  const char* src =
      "input x: int; input s: string;"
      "if (x == 1 || contains(s, \"abc\")) { reject; } accept;";
  Bytes big(1000, 'z');
  // Left true: the scan never runs, so cost stays flat in the string length.
  EvalResult fast =
      run(src, {{"x", Value{std::uint64_t{1}}}, {"s", Value{big}}});
  CHECK(fast.verdict == Verdict::Reject);
  // if(1) + or(1) + cmp(3) + reject(1)
  CHECK(fast.cost.steps == 6);
  // Left false: the scan runs over all 998 positions.
  EvalResult slow =
      run(src, {{"x", Value{std::uint64_t{2}}}, {"s", Value{big}}});
  CHECK(slow.verdict == Verdict::Accept);
  CHECK(slow.cost.steps == 6 + 3 + 998);

  const char* and_src =
      "input x: int; input s: string;"
      "if (x == 1 && contains(s, \"abc\")) { reject; } accept;";
  EvalResult skip =
      run(and_src, {{"x", Value{std::uint64_t{2}}}, {"s", Value{big}}});
  // if(1) + and(1) + cmp(3) + accept(1)
  CHECK(skip.cost.steps == 6);
}

TEST_CASE("cost is deterministic") {
  const char* src =
      "input s: string;"
      "let n = length(s);"
      "if (n > 2 && contains(s, \"ab\")) { reject; }"
      "accept;";
  InputBinding b{{"s", Value{Bytes("xxxab")}}};
  EvalResult first = run(src, b);
  for (int i = 0; i < 5; ++i) {
    EvalResult again = run(src, b);
    CHECK(again.verdict == first.verdict);
    CHECK(again.cost.steps == first.cost.steps);
    CHECK(again.cost.hash_invocations == first.cost.hash_invocations);
    CHECK(again.cost.bytes_hashed == first.cost.bytes_hashed);
  }
}

TEST_CASE("contains cost grows linearly with the haystack") {
  const char* src =
      "input s: string; if (contains(s, \"not-there\")) { reject; } accept;";
  Program p = load_program(src);
  auto steps_at = [&](std::size_t n) {
    return evaluate(p, {{"s", Value{Bytes(std::string(n, 'x'))}}}).cost.steps;
  };
  for (std::size_t n = 1024; n <= 16384; n *= 2) {
    double ratio = double(steps_at(2 * n)) / double(steps_at(n));
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
  }
}

TEST_CASE("binding mismatches fault") {
  Program p = load_program("input x: int; if (x == 1) { reject; } accept;");
  CHECK_THROWS_AS(evaluate(p, {}), TypeFault);
  CHECK_THROWS_AS(evaluate(p, {{"x", Value{Bytes("1")}}}), TypeFault);
  CHECK_THROWS_AS(evaluate(p, {{"x", Value{std::uint64_t{1}}},
                               {"y", Value{std::uint64_t{2}}}}),
                  TypeFault);
  CHECK_THROWS_AS(evaluate(p, {{"y", Value{std::uint64_t{1}}}}), TypeFault);
}

TEST_CASE("evaluate_expr sees the provided environment") {
  Program p = load_program("input x: int; if (x == 7) { reject; } accept;");
  const auto& ifs = std::get<IfStmt>(p.body[0]->node);
  CostReport cost;
  Value hit = evaluate_expr(*ifs.cond, {{"x", Value{std::uint64_t{7}}}}, cost);
  CHECK(std::get<bool>(hit));
  Value miss = evaluate_expr(*ifs.cond, {{"x", Value{std::uint64_t{9}}}}, cost);
  CHECK(!std::get<bool>(miss));
  CHECK(cost.steps == 6);
}
