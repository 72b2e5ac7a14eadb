#include "sel4sel/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "sel4sel/parallel.hpp"

namespace sel4sel {

void GaConfig::validate() const {
  if (population_size < kNoveltyNeighbors + 1) {
    throw std::invalid_argument("population_size must be at least " +
                                std::to_string(kNoveltyNeighbors + 1) +
                                " (novelty needs 5 neighbors)");
  }
  if (generations < 0) {
    throw std::invalid_argument("generations must be non-negative");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  }
}

namespace {

GenerationStats collect_stats(const Population& pop, int generation) {
  GenerationStats stats;
  stats.generation = generation;
  double fitness_sum = 0.0;
  double novelty_sum = 0.0;
  double max_fitness = pop.members.front().fitness;
  for (const Individual& member : pop.members) {
    fitness_sum += member.fitness;
    novelty_sum += novelty(member.genome, pop, /*exclude_self=*/true);
    max_fitness = std::max(max_fitness, member.fitness);
  }
  const double count = static_cast<double>(pop.members.size());
  stats.mean_fitness = fitness_sum / count;
  stats.mean_novelty = novelty_sum / count;
  stats.max_fitness = max_fitness;
  return stats;
}

// Single inner-loop implementation shared by the traced and the
// final-fitness-only entry points; the two consume the random stream
// identically because stats and probes draw nothing (probes draw only when
// requested, which changes the configuration, not the path identity).
RunTrace run_ga_impl(const GaConfig& config, const TaskInstance& task,
                     const SelectionPolicy& policy, std::span<const int> probe_generations,
                     bool with_stats) {
  config.validate();
  Rng rng(config.seed);
  PolicyScorer scorer(policy, config.novelty_raw_sum);

  Population pop;
  pop.task = task;
  pop.generation = 0;
  pop.members.reserve(static_cast<std::size_t>(config.population_size));
  for (int i = 0; i < config.population_size; ++i) {
    const Genome g = random_genome(rng);
    pop.members.push_back({g, 0, fitness(task, g)});
  }

  RunTrace trace;
  trace.config = config;
  trace.task = task;
  if (with_stats) {
    trace.stats.reserve(static_cast<std::size_t>(config.generations) + 1);
    trace.stats.push_back(collect_stats(pop, 0));
  }

  const std::size_t p = pop.members.size();
  std::vector<Individual> offspring(p);
  std::vector<char> replaced(p);
  for (int gen = 1; gen <= config.generations; ++gen) {
    pop.generation = gen;
    // Offspring come from the generation-start snapshot...
    for (std::size_t i = 0; i < p; ++i) {
      const Genome child = mutate(pop.members[i].genome, config.mutation_rate, rng);
      offspring[i] = {child, 0, fitness(task, child)};
    }
    // ...but tournaments run against the live, possibly already-updated
    // population, and replacements apply immediately. Ties favor the
    // offspring.
    std::fill(replaced.begin(), replaced.end(), 0);
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t target = rng.uniform_index(p);
      const double offspring_score =
          scorer.internal_fitness(offspring[i], /*is_member=*/false, pop, config.generations, rng);
      const double competitor_score = scorer.internal_fitness(
          pop.members[target], /*is_member=*/true, pop, config.generations, rng);
      if (offspring_score >= competitor_score) {
        pop.members[target] = offspring[i];
        replaced[target] = 1;
      }
    }
    for (std::size_t i = 0; i < p; ++i) {
      if (!replaced[i]) ++pop.members[i].age;
    }
    if (with_stats) {
      GenerationStats stats = collect_stats(pop, gen);
      if (std::find(probe_generations.begin(), probe_generations.end(), gen) !=
          probe_generations.end()) {
        stats.probe = probe_population(policy, pop, config.generations, rng,
                                       config.novelty_raw_sum);
      }
      trace.stats.push_back(std::move(stats));
    }
  }

  if (!with_stats) {
    // The final-fitness path still reports the closing state.
    trace.stats.push_back(collect_stats(pop, config.generations));
  }
  trace.final_population = std::move(pop);
  return trace;
}

}  // namespace

RunTrace run_ga(const GaConfig& config, const TaskInstance& task, const SelectionPolicy& policy,
                std::span<const int> probe_generations) {
  return run_ga_impl(config, task, policy, probe_generations, /*with_stats=*/true);
}

double run_ga_final_fitness(const GaConfig& config, const TaskInstance& task,
                            const SelectionPolicy& policy) {
  return run_ga_impl(config, task, policy, {}, /*with_stats=*/false).stats.back().mean_fitness;
}

namespace {

std::pair<double, double> mean_and_sample_std(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

EvaluationResult evaluate_policy(const SelectionPolicy& policy, DomainKind domain, int trials,
                                 const GaConfig& config, int threads,
                                 std::span<const int> probe_generations) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  config.validate();

  std::vector<RunTrace> traces(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int trial) {
    Rng trial_rng(derive_seed(config.seed, {kSaltEvalTrial, static_cast<std::uint64_t>(trial)}));
    const TaskInstance task = sample_task(domain, trial_rng);
    GaConfig run_config = config;
    run_config.seed = trial_rng.next_u64();
    traces[static_cast<std::size_t>(trial)] = run_ga(run_config, task, policy, probe_generations);
  });

  std::vector<double> final_fitness;
  std::vector<double> final_novelty;
  final_fitness.reserve(traces.size());
  final_novelty.reserve(traces.size());
  for (const RunTrace& trace : traces) {
    final_fitness.push_back(trace.stats.back().mean_fitness);
    final_novelty.push_back(trace.stats.back().mean_novelty);
  }
  const auto [f_mean, f_std] = mean_and_sample_std(final_fitness);
  const auto [n_mean, n_std] = mean_and_sample_std(final_novelty);

  EvaluationResult result;
  result.summary.policy = std::string(policy.label());
  result.summary.domain = std::string(domain_name(domain));
  result.summary.trials = trials;
  result.summary.fitness_mean = f_mean;
  result.summary.fitness_std = f_std;
  result.summary.novelty_mean = n_mean;
  result.summary.novelty_std = n_std;
  result.summary.single_sample = trials == 1;
  result.traces = std::move(traces);
  return result;
}

}  // namespace sel4sel
