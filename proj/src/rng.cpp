//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/rng.hpp"

namespace pathharden {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::for_index(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix(seed) ^ mix(index * 0xd1342543de82ef95ULL + 1));
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

std::uint64_t Rng::range(std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi) return lo;
  const std::uint64_t width = hi - lo;
  if (width == UINT64_MAX) return next_u64();
  return lo + below(width + 1);
}

bool Rng::chance(std::uint64_t numer, std::uint64_t denom) {
  if (denom == 0 || numer >= denom) return numer > 0;
  return below(denom) < numer;
}

Bytes Rng::bytes(std::size_t len) {
  Bytes out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(char(next_u64() & 0xff));
  }
  return out;
}

}  // namespace pathharden
