#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "sel4sel/rng.hpp"

namespace sel4sel {

// Fixed-length binary genome. Bit index 0 is the leftmost character of the
// textual rendering and the most significant bit of the packed value, so
// Genome::parse("0000000000000001").packed() == 1.
class Genome {
 public:
  static constexpr int kLength = 16;

  constexpr Genome() = default;

  static constexpr Genome from_packed(std::uint16_t packed) { return Genome(packed); }

  // Parses a 16-character '0'/'1' string; throws std::invalid_argument otherwise.
  static Genome parse(std::string_view text);

  constexpr int bit(int index) const noexcept {
    return (packed_ >> (kLength - 1 - index)) & 1;
  }

  constexpr void set_bit(int index, int value) noexcept {
    const std::uint16_t mask = static_cast<std::uint16_t>(1u << (kLength - 1 - index));
    packed_ = value ? (packed_ | mask) : (packed_ & ~mask);
  }

  constexpr std::uint16_t packed() const noexcept { return packed_; }

  int popcount() const noexcept { return std::popcount(packed_); }

  std::string str() const;

  friend constexpr bool operator==(Genome, Genome) = default;

 private:
  explicit constexpr Genome(std::uint16_t packed) : packed_(packed) {}

  std::uint16_t packed_ = 0;
};

inline int hamming(Genome a, Genome b) noexcept {
  return std::popcount(static_cast<std::uint16_t>(a.packed() ^ b.packed()));
}

// Each bit is an independent Bernoulli(0.5) draw, consumed in index order.
Genome random_genome(Rng& rng);

// Copy of the parent where each bit independently has probability `rate` of
// being replaced by a fresh uniform random bit (which may equal the original,
// so the effective flip probability per bit is rate / 2). Draws are consumed
// in index order.
Genome mutate(Genome parent, double rate, Rng& rng);

}  // namespace sel4sel
