#pragma once

#include <cstdint>
#include <random>

namespace logpart {

// The standard distributions are implementation-defined; these helpers keep
// every seeded result identical across standard libraries.

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for stream `index` under `seed`; streams are independent of the
/// order in which they are created.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

/// Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace logpart
