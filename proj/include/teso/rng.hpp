#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

// Seeded, portable randomness for the simulator and the DE solver.
//
// Core generator: xoshiro256++ 1.0, state expanded from a 64-bit seed with
// SplitMix64. Sub-streams are derived with derive_stream(seed, tag0, tag1),
// which is a SplitMix64 finalizer chain over the seed and the two tags, so a
// stream is a pure function of (seed, tags) and independent draws never
// interleave. Normal deviates use Box-Muller on (0,1] x [0,1) uniforms; each
// generator instance caches the spare deviate.
//
// Note: integer draws are bit-exact everywhere; normal/uniform doubles are
// bit-exact up to the platform's libm (log/sin/cos rounding).

namespace teso {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag0,
                                   std::uint64_t tag1 = 0) {
  std::uint64_t h = seed;
  std::uint64_t out = splitmix64_next(h);
  h ^= tag0;
  out ^= splitmix64_next(h);
  h ^= tag1;
  out ^= splitmix64_next(h);
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n), modulo-rejection method.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (~n + 1) % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r < threshold);
    return r % n;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps log() finite.
    const double u1 =
        (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace teso
