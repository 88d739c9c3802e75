#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace bnpmle {

//! All stochastic code draws from a mt19937_64 stream through the explicit
//! transforms below. The <random> distribution classes are implementation-
//! defined, so seeded runs would not reproduce across standard libraries;
//! these do.
using Rng = std::mt19937_64;

//! Uniform on [0, 1), 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

//! Uniform on (0, 1]; safe to pass to log.
inline double uniform01_positive(Rng& rng) { return 1.0 - uniform01(rng); }

//! Unbiased integer in [0, bound) by bucketed rejection (no modulo bias).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t bucket = std::numeric_limits<std::uint64_t>::max() / bound;
  const std::uint64_t limit = bucket * bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x / bucket;
}

//! In-place Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_values(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

} // namespace bnpmle
