#pragma once

// Deterministic random number generation and seed derivation.
//
// All sampling in this library consumes an explicit Rng so that identical
// (config, seed) pairs produce identical output bytes on every platform.
// Stream splitting follows a fixed contract: a child seed is
// derive_seed(seed, tag) for a purpose tag, optionally extended by an
// integer index or a genealogical path. Lazily generated per-index driver
// randomness stays reproducible because the derivation is a pure function
// of (seed, tag, path).

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cpab {

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::span<const int> path);

// xoshiro256** seeded via splitmix64. Distribution code is hand-rolled on
// top of next_u64 so results do not depend on the C++ standard library's
// unspecified distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform01();

  // Uniform integer in {0, ..., n-1}; n must be positive.
  std::size_t uniform_below(std::size_t n);

  // Exponential with the given rate (> 0).
  double exponential(double rate);

  // Standard normal via Box-Muller.
  double normal();

  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang; boost for shape < 1).
  double gamma(double shape);

  // Uniform random permutation of {0, ..., n-1} (Fisher-Yates).
  std::vector<std::uint32_t> permutation(std::size_t n);

  // Index drawn proportionally to the given non-negative weights.
  std::size_t discrete(std::span<const double> weights);

 private:
  std::uint64_t state_[4];
};

}  // namespace cpab
