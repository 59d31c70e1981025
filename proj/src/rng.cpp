#include "pooltrace/rng.hpp"

namespace pooltrace {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
__extension__ typedef unsigned __int128 u128;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng CounterRng::stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t key = mix64(seed + kGamma);
  key = mix64(key ^ (tag * 0xd1b54a32d192ed03ULL));
  key = mix64(key + index * kGamma);
  return CounterRng(key);
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

// Lemire's multiply-shift with rejection; unbiased.
std::uint64_t CounterRng::uniform_below(std::uint64_t bound) {
  std::uint64_t x = (*this)();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace pooltrace
