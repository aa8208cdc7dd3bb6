#pragma once

#include <cstdint>
#include <random>

namespace frontlab {

/// splitmix64 finalizer; good avalanche, cheap, and stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: deterministic engine for (seed, counter) pairs.
/// Used for per-cell randomness in random media (window-extensible
/// realizations) and per-task streams in batch drivers.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::int64_t counter) {
  const auto c = static_cast<std::uint64_t>(counter);
  return std::mt19937_64(splitmix64(seed ^ splitmix64(c)));
}

}  // namespace frontlab
