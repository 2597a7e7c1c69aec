#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

// Small deterministic sampling helpers. The standard distributions are
// implementation-defined, so everything that must reproduce bit-for-bit
// (noise fields, sampled bit vectors, toy-model weights) draws raw engine
// output and maps it here.

namespace psx::rng {

/// One splitmix64 step; also used to combine seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a base seed and a list of stream ids.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t id : ids) {
    state ^= id + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    out = splitmix64(state);
  }
  return out;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Single coin flip from the top engine bit.
inline bool coin(std::mt19937_64& gen) { return (gen() >> 63) != 0; }

/// Standard normal via Box-Muller. Consumes exactly two engine draws.
inline double gaussian(std::mt19937_64& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1], keeps log finite
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace psx::rng
