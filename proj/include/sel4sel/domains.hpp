#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "sel4sel/bitstring.hpp"
#include "sel4sel/rng.hpp"

namespace sel4sel {

enum class DomainKind { convex, hashed, deceptive };

std::string_view domain_name(DomainKind kind);

// Throws std::invalid_argument naming the valid domains.
DomainKind parse_domain(std::string_view name);

// One sampled task. `run_constant` is fixed for the lifetime of a GA run and
// only consulted by the hashed domain.
struct TaskInstance {
  DomainKind kind = DomainKind::convex;
  std::uint64_t run_constant = 0;
};

TaskInstance sample_task(DomainKind kind, Rng& rng);

// Twice the number of set bits; maximum 32 at the all-ones genome.
double convex_fitness(Genome g);

// 2^R with R = min(|Normal(0, sd=4/3)|, 5), drawn from a stream seeded with
// mix64(genome-as-integer + run_constant). Deterministic per (constant,
// genome); uncorrelated across neighboring genomes. Range (1, 32].
double hashed_fitness(std::uint64_t run_constant, Genome g);

// Hierarchical if-and-only-if over any power-of-two length >= 2. Level-1
// pairs adjacent bits; level k pairs adjacent valid level-(k-1) blocks whose
// values agree. Every valid pair awards the length of one paired element.
int hiff_fitness(std::span<const int> bits);

// hiff_fitness over the 16 genome bits; maximum 32 at all-zeros and all-ones.
int deceptive_fitness(Genome g);

// Dispatch on the task's domain. Pure; always in [0, 32].
double fitness(const TaskInstance& task, Genome g);

}  // namespace sel4sel
