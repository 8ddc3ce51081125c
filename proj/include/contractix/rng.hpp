#pragma once

#include <cstdint>

namespace contractix {

/// Stateless counter-based uniform draws. Every value is a pure function of
/// (seed, stream, index), so results do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
    return mix(key_ ^ mix(stream * 0x9e3779b97f4a7c15ULL + index));
  }

  // [0, 1) with 53 random bits.
  double uniform01(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t index) const {
    return lo + (hi - lo) * uniform01(stream, index);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace contractix
