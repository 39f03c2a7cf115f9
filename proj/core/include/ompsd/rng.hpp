#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace ompsd {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Combines two words into a well-mixed child seed. Not symmetric.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// FNV-1a of a label, used to derive per-method stream seeds.
std::uint64_t hash_label(std::string_view label);

// Seeded random stream. The engine (mt19937_64) is fully specified by the C++
// standard; the distributions below are implemented here rather than taken
// from <random>, whose algorithms differ between standard libraries. Normal
// variates go through std::log/std::sqrt, so bit-identical results across
// platforms additionally require a correctly rounded libm (glibc is).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform integer in [0, n), unbiased. Requires n >= 1.
  std::size_t below(std::size_t n);

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace ompsd
