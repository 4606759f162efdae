#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace shiftscan {

// All randomness in the toolkit goes through these helpers instead of
// std::*_distribution, whose output is not pinned by the standard. mt19937_64
// itself is algorithmically specified, so seeded runs reproduce bit-for-bit
// on any conforming implementation.

/// Uniform double in [0, 1) with 53 bits of randomness.
inline double rng_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n must be > 0.
inline std::uint64_t rng_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

/// Fisher-Yates shuffle using rng_index draws.
template <typename T>
void rng_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace shiftscan
