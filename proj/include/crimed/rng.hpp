#pragma once

#include <cstdint>
#include <random>

#include "crimed/normal.hpp"

namespace crimed {

// All randomness flows through std::mt19937_64, whose output sequence is
// fixed by the C++ standard, with the transforms below. This keeps traces
// bit-identical for a given seed on any conforming platform; none of the
// implementation-defined std <random> distributions are used.
using Rng = std::mt19937_64;

// SplitMix64 finaliser (Steele, Lea, Flood 2014).
inline std::uint64_t split_mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-repetition seed: two SplitMix64 rounds over (master_seed, index).
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint64_t index) {
  return split_mix64(split_mix64(master_seed) ^ split_mix64(~index));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform on (0,1): top 53 bits, zero mapped to the smallest step.
inline double uniform01(Rng& rng) {
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Standard normal by inversion.
inline double normal_sample(Rng& rng) { return norm_cdf_inv(uniform01(rng)); }

inline double normal_sample(Rng& rng, double mean, double sigma) {
  return mean + sigma * normal_sample(rng);
}

// Cauchy by inversion: location + scale * tan(pi*(u - 1/2)).
inline double cauchy_sample(Rng& rng, double location, double scale) {
  constexpr double kPi = 3.14159265358979323846;
  return location + scale * std::tan(kPi * (uniform01(rng) - 0.5));
}

inline bool bernoulli_sample(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace crimed
