#include "sel4sel/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sel4sel {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: length mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("pearson: need at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

CorrelationProbe probe_population(const SelectionPolicy& policy, const Population& pop,
                                  int total_generations, Rng& rng, bool novelty_raw_sum) {
  const std::size_t n = pop.members.size();
  std::vector<double> fitness_x(n);
  std::vector<double> rank_x(n);
  std::vector<double> age_x(n);
  std::vector<double> novelty_x(n);
  std::vector<double> noise_x(n);
  std::vector<double> scores(n);

  PolicyScorer scorer(policy, novelty_raw_sum);
  for (std::size_t i = 0; i < n; ++i) {
    const Individual& member = pop.members[i];
    const FeatureVector fv =
        extract_features(member, /*is_member=*/true, pop, total_generations, rng,
                         novelty_raw_sum);
    fitness_x[i] = fv.fitness_norm;
    rank_x[i] = fv.rank_norm;
    age_x[i] = fv.age_norm;
    novelty_x[i] = fv.novelty_norm;
    noise_x[i] = fv.noise;
    // Score from the same feature draw, so the probed noise input is the one
    // the network actually saw.
    switch (policy.kind()) {
      case PolicyKind::network: scores[i] = scorer.score_features(fv); break;
      case PolicyKind::underlying_fitness: scores[i] = member.fitness; break;
      case PolicyKind::novelty: scores[i] = fv.novelty_norm; break;
      case PolicyKind::minimal_criterion:
        scores[i] = std::min(member.fitness, policy.criterion_cap());
        break;
      case PolicyKind::random_drift: scores[i] = rng.uniform(); break;
    }
  }

  CorrelationProbe probe;
  probe.generation = pop.generation;
  probe.fitness = pearson(fitness_x, scores);
  probe.rank = pearson(rank_x, scores);
  probe.age = pearson(age_x, scores);
  probe.novelty = pearson(novelty_x, scores);
  probe.noise = pearson(noise_x, scores);
  return probe;
}

}  // namespace sel4sel
