#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace prwf {

/// SplitMix64 finalizer. Used to expand seeds and to hash seed tuples.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a tuple of 64-bit words, built by chaining
/// splitmix64 over `state ^ word`. Each step is a bijection of the state, so
/// two tuples of equal length that differ in a single word never collide.
std::uint64_t hash_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// xoshiro256** (Blackman & Vigna) with state seeded by four successive
/// splitmix64 outputs. Normal deviates use the Box-Muller transform and cache
/// the second value of each pair.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1], 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal deviate.
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace prwf
