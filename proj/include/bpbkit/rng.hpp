#pragma once

#include <array>
#include <cstdint>

#include "bpbkit/scalar.hpp"

namespace bpbkit {

/// SplitMix64, used for seeding and for deriving independent sub-streams.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256**: the named, seedable, portable generator used for all
/// sampling. Every report records the seed it was driven by; identical seeds
/// give bit-identical streams on every platform.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with the full 53-bit mantissa; bit-portable.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t bound) {
    // Simple multiply-shift reduction; bias is irrelevant at these sizes and
    // determinism is what matters.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform phase factor e^{i theta}, theta in [0, 2*pi).
  Cx phase() {
    double th = uniform() * kTwoPi;
    return Cx(std::cos(th), std::sin(th));
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_;
};

/// Deterministic per-task sub-seed, schedule-independent: two tasks with the
/// same (master, index) always get the same stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 sm(master ^ (0x9E3779B97F4A7C15ULL + index * 0xD1B54A32D192ED03ULL));
  sm.next();
  return sm.next();
}

}  // namespace bpbkit
