#pragma once

#include <vector>

#include "sel4sel/bitstring.hpp"
#include "sel4sel/domains.hpp"
#include "sel4sel/rng.hpp"

namespace sel4sel {

struct Individual {
  Genome genome;
  int age = 0;           // generations survived since insertion
  double fitness = 0.0;  // underlying fitness under the owning run's task
};

struct Population {
  std::vector<Individual> members;
  int generation = 0;
  TaskInstance task;

  std::size_t size() const { return members.size(); }
};

inline constexpr int kNoveltyNeighbors = 5;

// Mean Hamming distance to the 5 nearest population genomes, in [0, 16].
// When `exclude_self` is set, one occurrence of g itself is skipped (the
// caller is a population member). With `raw_sum` the unaveraged sum of the 5
// distances is returned instead, in [0, 80].
// Throws std::invalid_argument when fewer than 5 candidate neighbors exist.
double novelty(Genome g, const Population& pop, bool exclude_self, bool raw_sum = false);

// (members with strictly lower fitness) / (P - 1): the worst member gets 0, a
// unique best gets 1, ties share the lower rank.
double rank_of(double fitness_value, const Population& pop);

// The six selection-network inputs, each in [0, 1], in network input order.
struct FeatureVector {
  double fitness_norm = 0.0;
  double rank_norm = 0.0;
  double age_norm = 0.0;
  double novelty_norm = 0.0;
  double noise = 0.0;
  double generation_norm = 0.0;
};

// `is_member` marks individuals currently inside the population (their own
// novelty entry is excluded); offspring pass false and age 0. Noise is a
// fresh uniform draw on every call.
FeatureVector extract_features(const Individual& ind, bool is_member, const Population& pop,
                               int total_generations, Rng& rng, bool novelty_raw_sum = false);

}  // namespace sel4sel
