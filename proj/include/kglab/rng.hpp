#pragma once

// Counter-based uniform generator: every draw is a pure function of
// (seed, stream, index), so samples can be produced in any order.

#include <cstdint>

namespace kglab {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
    return splitmix64(key_ ^ splitmix64(stream * 0xd1b54a32d192ed03ULL + splitmix64(index)));
  }

  /// Uniform on [0, 1) with 53 random bits; exactly representable as a dyadic rational.
  constexpr double uniform(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t stream, std::uint64_t index, std::uint64_t n) const {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (std::uint64_t k = 0;; ++k) {
      const std::uint64_t v = bits(stream, index * 64 + k);
      if (v < limit) return v % n;
    }
  }

 private:
  std::uint64_t key_;
};

}  // namespace kglab
