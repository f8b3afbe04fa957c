#pragma once

#include <cstdint>
#include <random>

namespace nmtprep {

/// Versioned pseudo-random source used by every seeded operation.
///
/// Version 1: std::mt19937_64 (its output sequence is fixed by the C++
/// standard) seeded with the 64-bit seed; bounded integers by rejection
/// sampling on the raw 64-bit output; unit reals from the top 53 bits.
/// std::uniform_*_distribution is never used because its algorithm is
/// implementation-defined.
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform real in [0, 1).
  double unit();
  /// True with probability p (p <= 0 never, p >= 1 always).
  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; mixes a seed with a stream index to give
/// independent child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nmtprep
