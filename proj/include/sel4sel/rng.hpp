#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace sel4sel {

inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Vigna). Doubles as the avalanche hash behind the
// hashed domain and seed derivation; its constants are part of the artifact's
// reproducibility contract.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child-stream seed from a base seed and a sequence of salt words. Runs,
// trials, and ES copies each get their own stream so that thread scheduling
// can never reorder draws.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> salts) noexcept {
  std::uint64_t h = base;
  for (std::uint64_t s : salts) {
    h = mix64((h + kSplitmixGamma) ^ mix64(s + kSplitmixGamma));
  }
  return h;
}

// Deterministic SplitMix64 stream. One owner at a time; never shared across
// threads.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kSplitmixGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // One Bernoulli(0.5) draw; consumes exactly one stream word.
  int uniform_bit() noexcept { return static_cast<int>(next_u64() >> 63); }

  // Uniform index in [0, n) via multiply-shift (no modulo bias to speak of).
  std::size_t uniform_index(std::size_t n) noexcept {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Box-Muller; consumes exactly two stream words per call.
  double normal(double mean = 0.0, double stddev = 1.0) noexcept {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return mean + stddev * radius * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
};

// Salt words for the documented seed-splitting rule.
enum SeedSalt : std::uint64_t {
  kSaltPolicyInit = 1,  // network parameter initialization
  kSaltMetaCopy = 2,    // (iteration, copy) streams in the ES outer loop
  kSaltEvalTrial = 3,   // per-trial streams in policy evaluation
};

}  // namespace sel4sel
