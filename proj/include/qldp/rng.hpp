#pragma once

#include <cstdint>
#include <random>

namespace qldp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream-splitting rule: stream `index` of master seed `seed` is a
/// mt19937_64 seeded with splitmix64(splitmix64(seed) ^ (index + 1)).
/// Each Monte Carlo batch owns one stream, so results depend only on
/// (seed, batch layout) and not on how batches are assigned to threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index + 1)));
}

}  // namespace qldp
