#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "mmf/linalg.hpp"

namespace mmf {

/// Deterministic pseudo-random source.
///
/// The engine is std::mt19937_64 (fully specified by the standard) and every
/// distribution comes from Boost.Random, whose algorithms are fixed across
/// platforms, so a seed reproduces the same stream everywhere. An Rng is
/// single-owner; concurrent work uses separate instances seeded through
/// derive_seed().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();
  double normal();
  double normal(double stddev);
  /// Circularly-symmetric complex Gaussian with unit variance:
  /// real and imaginary parts i.i.d. N(0, 1/2).
  Complex complex_normal();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64-style mix of (master, stream); distinct streams give
/// statistically independent seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace mmf
