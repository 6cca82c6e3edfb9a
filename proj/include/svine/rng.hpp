#pragma once

#include <cstdint>

namespace svine {

/// Counter-based uniform generator: uniform(i) is a pure function of
/// (seed, stream, i), so a path is reproducible regardless of evaluation
/// order and independent substreams can be split off for parallel workers.
/// Mixing is the SplitMix64 finalizer over a keyed counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  /// i-th uniform of the stream, strictly inside (0, 1).
  [[nodiscard]] double uniform(std::uint64_t i) const {
    const std::uint64_t z = mix(key_ + (i + 1) * 0x9e3779b97f4a7c15ull);
    return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  /// Sequential convenience: uniform(counter++).
  double next() { return uniform(counter_++); }

  /// Independent substream derived from this generator's key.
  [[nodiscard]] CounterRng split(std::uint64_t substream) const {
    return CounterRng(key_, substream + 1);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace svine
