#pragma once

#include <cstdint>

// Deterministic random streams. Everything here is fully specified at the
// bit level so that identical seeds give identical draws on every platform:
// no std:: distributions are used anywhere in the library.
//
// Stream derivation for experiments: a stream for cell (d, m, q, theta,
// trial) under master seed S is SplitMix64 seeded with
//   hash_combine(...hash_combine(hash_combine(S, mode_id), d)..., trial)
// folding the components in the listed order; doubles are folded by their
// IEEE-754 bit pattern. Ports in other languages reproduce streams by
// copying these two functions verbatim.

namespace sparsetrig::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + kGolden + (h << 6) + (h >> 2);
  return splitmix_finalize(h);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return splitmix_finalize(state_);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in {0, ..., n-1}, unbiased via rejection
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // uniform integer in [lo, hi] inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  bool coin() { return (next() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace sparsetrig::rng
