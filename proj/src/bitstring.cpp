#include "sel4sel/bitstring.hpp"

#include <stdexcept>

namespace sel4sel {

Genome Genome::parse(std::string_view text) {
  if (text.size() != kLength) {
    throw std::invalid_argument("genome text must have exactly 16 characters, got " +
                                std::to_string(text.size()));
  }
  std::uint16_t packed = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("genome text may contain only '0' and '1'");
    }
    packed = static_cast<std::uint16_t>((packed << 1) | (c == '1'));
  }
  return Genome::from_packed(packed);
}

std::string Genome::str() const {
  std::string out(kLength, '0');
  for (int i = 0; i < kLength; ++i) {
    if (bit(i)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

Genome random_genome(Rng& rng) {
  Genome g;
  for (int i = 0; i < Genome::kLength; ++i) {
    g.set_bit(i, rng.uniform_bit());
  }
  return g;
}

Genome mutate(Genome parent, double rate, Rng& rng) {
  Genome child = parent;
  for (int i = 0; i < Genome::kLength; ++i) {
    if (rng.uniform() < rate) {
      child.set_bit(i, rng.uniform_bit());
    }
  }
  return child;
}

}  // namespace sel4sel
