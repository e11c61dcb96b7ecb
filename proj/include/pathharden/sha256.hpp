//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace pathharden {

// FIPS 180-4 SHA-256. Streaming interface plus a one-shot helper.
class Sha256 {
 public:
  using Digest = std::array<std::uint8_t, 32>;

  Sha256();

  void update(const void* data, std::size_t len);
  void update(std::string_view bytes) { update(bytes.data(), bytes.size()); }
  Digest finish();

  static Digest hash(std::string_view bytes);

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_;
  std::uint64_t total_bytes_;
};

}  // namespace pathharden
