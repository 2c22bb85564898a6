#pragma once

#include <cstdint>
#include <random>

namespace sirenelm {

// Every randomized component draws through these helpers so that a seed pins
// the exact output on any platform. std::mt19937_64 has a specified output
// sequence; the mappings below avoid std::uniform_*_distribution, whose draw
// behaviour is implementation-defined.
using Rng = std::mt19937_64;

// Uniform on [0, 1), 53 random mantissa bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on [-1, 1).
inline double uniform_pm1(Rng& rng) {
  return 2.0 * uniform_unit(rng) - 1.0;
}

// Uniform integer on [0, n). One engine draw per call (multiply-high mapping).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

// splitmix64 finalizer; derives independent per-stage seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sirenelm
