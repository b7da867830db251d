#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace chernum {

using Complex = std::complex<double>;

// All randomness in the library flows through this engine, seeded once from a 64-bit seed.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits; independent of the standard
// library's distribution implementations so corpus files are reproducible.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Complex unit_circle(Rng& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::polar(1.0, kTwoPi * uniform01(rng));
}

// splitmix64 finalizer; used to derive independent per-path streams from (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace chernum
