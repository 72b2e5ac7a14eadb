#pragma once

#include <optional>
#include <span>

#include "sel4sel/population.hpp"
#include "sel4sel/selection.hpp"

namespace sel4sel {

// Sample Pearson correlation; nullopt when either variance is zero.
// Throws std::invalid_argument on length mismatch or fewer than 2 points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Correlations between per-individual input metrics and internal fitness
// scores across one population. Entries are undefined exactly when the metric
// (or the score) is constant across the sample; generation is constant within
// a probe and therefore not probed.
struct CorrelationProbe {
  int generation = 0;
  std::optional<double> fitness;
  std::optional<double> rank;
  std::optional<double> age;
  std::optional<double> novelty;
  std::optional<double> noise;
};

// Scores every member from a freshly extracted FeatureVector (fresh noise per
// member) and correlates each metric with the scores.
CorrelationProbe probe_population(const SelectionPolicy& policy, const Population& pop,
                                  int total_generations, Rng& rng,
                                  bool novelty_raw_sum = false);

}  // namespace sel4sel
