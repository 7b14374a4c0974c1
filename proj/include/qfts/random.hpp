#pragma once

#include <cstdint>
#include <limits>

namespace qfts {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the n-th output is a pure function of
/// (seed, stream, index, n). Each sample of a simulated record gets its own
/// engine, so draws do not depend on the order or thread they run in.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  constexpr CounterEngine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
      : key_(mix64(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL)) ^ (index * 0x9e3779b97f4a7c15ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qfts
