#include "sel4sel/population.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>

namespace sel4sel {

double novelty(Genome g, const Population& pop, bool exclude_self, bool raw_sum) {
  // Distances are bounded by 16, so a counting pass beats sorting here.
  std::array<int, Genome::kLength + 1> counts{};
  bool self_skipped = !exclude_self;
  int candidates = 0;
  for (const Individual& member : pop.members) {
    const int d = hamming(g, member.genome);
    if (!self_skipped && d == 0) {
      self_skipped = true;
      continue;
    }
    ++counts[static_cast<std::size_t>(d)];
    ++candidates;
  }
  if (!self_skipped) {
    throw std::invalid_argument("novelty: exclude_self set but genome is not in the population");
  }
  if (candidates < kNoveltyNeighbors) {
    throw std::invalid_argument("novelty: population too small, need at least " +
                                std::to_string(kNoveltyNeighbors) + " neighbors, have " +
                                std::to_string(candidates));
  }
  int taken = 0;
  int sum = 0;
  for (int d = 0; d <= Genome::kLength && taken < kNoveltyNeighbors; ++d) {
    const int take = std::min(counts[static_cast<std::size_t>(d)], kNoveltyNeighbors - taken);
    sum += take * d;
    taken += take;
  }
  return raw_sum ? static_cast<double>(sum)
                 : static_cast<double>(sum) / static_cast<double>(kNoveltyNeighbors);
}

double rank_of(double fitness_value, const Population& pop) {
  if (pop.members.empty()) {
    throw std::invalid_argument("rank_of: empty population");
  }
  if (pop.members.size() == 1) return 0.0;
  int lower = 0;
  for (const Individual& member : pop.members) {
    if (member.fitness < fitness_value) ++lower;
  }
  return static_cast<double>(lower) / static_cast<double>(pop.members.size() - 1);
}

FeatureVector extract_features(const Individual& ind, bool is_member, const Population& pop,
                               int total_generations, Rng& rng, bool novelty_raw_sum) {
  const double denom = total_generations > 0 ? static_cast<double>(total_generations) : 1.0;
  const double novelty_scale =
      novelty_raw_sum ? static_cast<double>(kNoveltyNeighbors) * Genome::kLength
                      : static_cast<double>(Genome::kLength);
  FeatureVector fv;
  fv.fitness_norm = ind.fitness / 32.0;
  fv.rank_norm = rank_of(ind.fitness, pop);
  fv.age_norm = std::min(static_cast<double>(ind.age) / denom, 1.0);
  fv.novelty_norm = novelty(ind.genome, pop, is_member, novelty_raw_sum) / novelty_scale;
  fv.noise = rng.uniform();
  fv.generation_norm = static_cast<double>(pop.generation) / denom;
  return fv;
}

}  // namespace sel4sel
