//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pathharden/common.hpp"

namespace pathharden {

// SHA-256 is the only algorithm; salt is public, truncation exists so that
// collision behavior is measurable in tests.
struct HashConfig {
  std::vector<std::uint8_t> salt;  // 0..32 bytes
  unsigned truncate_bits = 256;    // multiple of 8, in [8, 256]

  bool operator==(const HashConfig&) const = default;
};

// Returns an empty optional if cfg is well formed, else a description.
std::optional<std::string> check_config(const HashConfig& cfg);

struct Digest {
  HashConfig config;
  std::vector<std::uint8_t> bytes;  // truncate_bits / 8 bytes

  bool operator==(const Digest&) const = default;
};

// Typed runtime value for hashing: a u64 or a byte string.
using HashableValue = std::variant<std::uint64_t, Bytes>;

// Domain-separated encoding: u64 -> 0x01 || 8-byte big-endian,
// string -> 0x02 || raw bytes. Injective across the two types.
Bytes encode_value(const HashableValue& v);

// SHA-256(salt || data), truncated to the leading truncate_bits/8 bytes.
Digest compute_digest(const Bytes& data, const HashConfig& cfg);

// Constant-time byte comparison; throws ConfigMismatch when configs differ.
bool digest_eq(const Digest& a, const Digest& b);

struct ContainsResult {
  bool found = false;
  std::uint64_t windows_hashed = 0;
};

// Slides a window of window_len bytes over haystack (full windows only) and
// compares each window's digest against target. Early exit on match.
ContainsResult hash_contains(const Bytes& haystack, const Digest& target,
                             std::uint64_t window_len);

// Union bound on the false-positive probability of m truncated-digest
// comparisons at d bits: min(1, m * 2^-d).
double fp_bound(std::uint64_t m, unsigned d);

// Text form: sha256[/t<bits>][/s<hex-salt>]:<hex-bytes>, lowercase hex.
// /t omitted means 256 bits; /s omitted means no salt.
std::string format_digest(const Digest& d);
Digest parse_digest(std::string_view text);  // throws Error on malformed input

}  // namespace pathharden
