//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <cstdint>

#include "pathharden/common.hpp"

namespace pathharden {

// splitmix64. Self-contained so that streams are bit-identical on every
// platform; the standard library distributions are not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derives an independent stream for (seed, index) pairs; used to fan
  // trials out without sharing state.
  static Rng for_index(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform in [0, bound); bound 0 yields 0. Rejection sampling, no modulo
  // bias.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi);

  // True with probability numer/denom (saturating).
  bool chance(std::uint64_t numer, std::uint64_t denom);

  Bytes bytes(std::size_t len);

 private:
  std::uint64_t state_;
};

}  // namespace pathharden
