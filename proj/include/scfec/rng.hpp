#pragma once

#include <cstdint>

#include "scfec/bits.hpp"

namespace scfec {

// SplitMix64 (Steele/Lea/Flood reference implementation). Used to expand and
// derive seeds; integer-only, so results are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : s_(seed) {}

  uint64_t next() {
    uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t s_;
};

// Derives an independent stream seed from a master seed and a stream index.
// Simulation rows use this so results do not depend on scheduling order or
// thread count: row k always draws from derive_seed(master, k).
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  SplitMix64 sm(master ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  sm.next();
  return sm.next();
}

// xoshiro256** 1.0 (Blackman/Vigna reference implementation); the main
// generator for channel noise and payload data.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& si : s_) si = sm.next();
  }

  uint64_t next() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t next_below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Fills every bit of `bits` with fair coin flips, 64 at a time.
inline void fill_random(BitVec& bits, Xoshiro256StarStar& rng) {
  const int words = bits.word_count();
  for (int w = 0; w < words; ++w) bits.word(w) = rng.next();
  const int tail = bits.size() % 64;
  if (words > 0 && tail != 0) bits.word(words - 1) &= (1ull << tail) - 1;
}

}  // namespace scfec
