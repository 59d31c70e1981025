#pragma once

#include <cstdint>
#include <limits>

namespace pooltrace {

/// Counter-based generator: output i is a bijective mix of (key + i * gamma).
///
/// Streams are addressed by key, so any replicate's randomness can be
/// reconstructed from (master seed, stream tag, index) without touching the
/// others. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Stream keyed by a master seed, a purpose tag and an index.
  static CounterRng stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer on [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace pooltrace
