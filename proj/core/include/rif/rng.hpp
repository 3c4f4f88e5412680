#pragma once

#include <cmath>
#include <cstdint>

namespace rif {

// SplitMix64 (Steele, Lea, Flood 2014). Counter-based: the state advances by a
// fixed Weyl increment and each output is a pure mix of the state, so streams
// are reproducible across platforms and cheap to split. This is the single
// generator used everywhere in the library; see README for the pinning note.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate; rate must be > 0.
  double next_exponential(double rate) {
    return -std::log1p(-next_unit()) / rate;
  }

 private:
  std::uint64_t state_;
};

// Stateless 64-bit mix used for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Replica i gets seed_i = mix(base ^ mix(i+1)); independent of thread layout.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return mix64(base_seed ^ mix64(index + 1));
}

}  // namespace rif
