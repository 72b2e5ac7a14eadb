#include "sel4sel/domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sel4sel {

std::string_view domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::convex: return "convex";
    case DomainKind::hashed: return "hashed";
    case DomainKind::deceptive: return "deceptive";
  }
  throw std::logic_error("unreachable domain kind");
}

DomainKind parse_domain(std::string_view name) {
  if (name == "convex") return DomainKind::convex;
  if (name == "hashed") return DomainKind::hashed;
  if (name == "deceptive") return DomainKind::deceptive;
  throw std::invalid_argument("unknown domain '" + std::string(name) +
                              "'; valid domains: convex, hashed, deceptive");
}

TaskInstance sample_task(DomainKind kind, Rng& rng) {
  TaskInstance task{kind, 0};
  if (kind == DomainKind::hashed) {
    task.run_constant = rng.next_u64();
  }
  return task;
}

double convex_fitness(Genome g) { return 2.0 * g.popcount(); }

double hashed_fitness(std::uint64_t run_constant, Genome g) {
  Rng stream(mix64(static_cast<std::uint64_t>(g.packed()) + run_constant));
  const double r = std::min(std::abs(stream.normal(0.0, 4.0 / 3.0)), 5.0);
  return std::exp2(r);
}

int hiff_fitness(std::span<const int> bits) {
  const std::size_t n = bits.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("hiff_fitness requires a power-of-two length >= 2");
  }
  struct Block {
    int value;
    bool valid;
  };
  std::vector<Block> level;
  level.reserve(n);
  for (int b : bits) level.push_back({b, true});

  int total = 0;
  int block_length = 1;  // length of each element paired at the current level
  while (level.size() > 1) {
    std::vector<Block> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      const Block& left = level[i];
      const Block& right = level[i + 1];
      const bool valid = left.valid && right.valid && left.value == right.value;
      if (valid) total += block_length;
      next.push_back({left.value, valid});
    }
    level = std::move(next);
    block_length *= 2;
  }
  return total;
}

int deceptive_fitness(Genome g) {
  int bits[Genome::kLength];
  for (int i = 0; i < Genome::kLength; ++i) bits[i] = g.bit(i);
  return hiff_fitness(bits);
}

double fitness(const TaskInstance& task, Genome g) {
  switch (task.kind) {
    case DomainKind::convex: return convex_fitness(g);
    case DomainKind::hashed: return hashed_fitness(task.run_constant, g);
    case DomainKind::deceptive: return deceptive_fitness(g);
  }
  throw std::logic_error("unreachable domain kind");
}

}  // namespace sel4sel
