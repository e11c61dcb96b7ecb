//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/digest.hpp"

#include <cmath>
#include <cstring>

#include "pathharden/sha256.hpp"

namespace pathharden {

std::optional<std::string> check_config(const HashConfig& cfg) {
  if (cfg.truncate_bits < 8 || cfg.truncate_bits > 256 ||
      cfg.truncate_bits % 8 != 0) {
    return "truncate_bits must be a multiple of 8 in [8, 256], got " +
           std::to_string(cfg.truncate_bits);
  }
  if (cfg.salt.size() > 32) {
    return "salt must be at most 32 bytes, got " +
           std::to_string(cfg.salt.size());
  }
  return std::nullopt;
}

Bytes encode_value(const HashableValue& v) {
  Bytes out;
  if (const auto* n = std::get_if<std::uint64_t>(&v)) {
    out.push_back('\x01');
    for (int i = 7; i >= 0; --i) out.push_back(char(*n >> (8 * i)));
  } else {
    const Bytes& s = std::get<Bytes>(v);
    out.push_back('\x02');
    out.append(s);
  }
  return out;
}

Digest compute_digest(const Bytes& data, const HashConfig& cfg) {
  Sha256 h;
  h.update(cfg.salt.data(), cfg.salt.size());
  h.update(data);
  const Sha256::Digest full = h.finish();
  Digest out;
  out.config = cfg;
  out.bytes.assign(full.begin(), full.begin() + cfg.truncate_bits / 8);
  return out;
}

bool digest_eq(const Digest& a, const Digest& b) {
  if (a.config != b.config) {
    throw ConfigMismatch("digest_eq: mismatched hash configurations (" +
                         format_digest(a) + " vs " + format_digest(b) + ")");
  }
  if (a.bytes.size() != b.bytes.size()) {
    throw ConfigMismatch("digest_eq: mismatched digest lengths");
  }
  volatile std::uint8_t acc = 0;
  for (std::size_t i = 0; i < a.bytes.size(); ++i) {
    acc = acc | std::uint8_t(a.bytes[i] ^ b.bytes[i]);
  }
  return acc == 0;
}

ContainsResult hash_contains(const Bytes& haystack, const Digest& target,
                             std::uint64_t window_len) {
  ContainsResult result;
  if (window_len == 0 || haystack.size() < window_len) return result;
  const std::size_t last = haystack.size() - window_len;
  for (std::size_t i = 0; i <= last; ++i) {
    const Bytes window = haystack.substr(i, window_len);
    const Digest d = compute_digest(encode_value(HashableValue(window)),
                                    target.config);
    ++result.windows_hashed;
    if (digest_eq(d, target)) {
      result.found = true;
      return result;
    }
  }
  return result;
}

double fp_bound(std::uint64_t m, unsigned d) {
  if (m == 0) return 0.0;
  const double p = double(m) * std::exp2(-double(d));
  return p > 1.0 ? 1.0 : p;
}

std::string format_digest(const Digest& d) {
  std::string out = "sha256";
  if (d.config.truncate_bits != 256) {
    out += "/t" + std::to_string(d.config.truncate_bits);
  }
  if (!d.config.salt.empty()) {
    out += "/s" + to_hex(d.config.salt);
  }
  out += ":" + to_hex(d.bytes);
  return out;
}

Digest parse_digest(std::string_view text) {
  const auto fail = [&](const std::string& why) -> Digest {
    throw Error("malformed digest literal \"" + std::string(text) + "\": " +
                why);
  };

  if (!text.starts_with("sha256")) fail("expected algorithm tag sha256");
  text.remove_prefix(6);

  Digest d;
  if (text.starts_with("/t")) {
    text.remove_prefix(2);
    std::size_t i = 0;
    unsigned bits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      bits = bits * 10 + unsigned(text[i] - '0');
      if (bits > 10000) fail("truncation width out of range");
      ++i;
    }
    if (i == 0) fail("expected digit count after /t");
    d.config.truncate_bits = bits;
    text.remove_prefix(i);
  }
  if (text.starts_with("/s")) {
    text.remove_prefix(2);
    std::size_t i = 0;
    while (i < text.size() && text[i] != ':') ++i;
    try {
      d.config.salt = from_hex(text.substr(0, i));
    } catch (const Error& e) {
      fail(e.what());
    }
    text.remove_prefix(i);
  }
  if (!text.starts_with(":")) fail("expected ':' before digest bytes");
  text.remove_prefix(1);
  try {
    d.bytes = from_hex(text);
  } catch (const Error& e) {
    fail(e.what());
  }

  if (const auto why = check_config(d.config)) fail(*why);
  if (d.bytes.size() != d.config.truncate_bits / 8) {
    fail("digest has " + std::to_string(d.bytes.size()) +
         " bytes but truncation width is " +
         std::to_string(d.config.truncate_bits) + " bits");
  }
  return d;
}

}  // namespace pathharden
