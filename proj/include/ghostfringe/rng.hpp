#pragma once

// Counter-based deterministic RNG: stream identity is (seed, stream_index),
// fully independent of evaluation order or thread schedule.
// splitmix64 expands the pair into xoshiro256++ state (Blackman & Vigna).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ghostfringe {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256pp {
 public:
  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream_index) {
    // decorrelate the two words before expansion
    std::uint64_t mix = seed;
    (void)splitmix64(mix);
    mix ^= 0xa0761d6478bd642fULL + stream_index * 0xe7037ed1a0b428dbULL;
    for (auto& w : s_) w = splitmix64(mix);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

struct NormalPair {
  double z0, z1;
};

// Box-Muller (trigonometric form): portable, branch-free, two N(0,1) per call.
inline NormalPair standard_normal_pair(Xoshiro256pp& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace ghostfringe
