#pragma once

#include <cstdint>

// Counter-based generator (rng-v1): every draw is a stateless mix of
// (seed, stream, counter) through the splitmix64 finalizer, so instance
// generation is bit-reproducible across platforms and languages. Normal
// variates use the Box-Muller transform.

namespace symcd::rng {

inline constexpr const char* kAlgorithmName = "splitmix64-counter-v1";

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent sub-seed for a (kind, n) slot of a parent seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t kind_tag, std::uint64_t n) {
  return mix64(mix64(mix64(seed) ^ kind_tag) ^ n);
}

class Counter {
 public:
  explicit Counter(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return mix64(seed_ ^ mix64(counter_++)); }

  // uniform in [0, 1)
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (consumes two uniforms, caches the pair)
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace symcd::rng
