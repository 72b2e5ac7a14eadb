#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sel4sel/correlation.hpp"
#include "sel4sel/domains.hpp"
#include "sel4sel/population.hpp"
#include "sel4sel/selection.hpp"

namespace sel4sel {

struct GaConfig {
  int population_size = 50;
  int generations = 2000;
  double mutation_rate = 0.05;
  std::uint64_t seed = 0;
  bool novelty_raw_sum = false;

  // Throws std::invalid_argument before any evolution happens.
  void validate() const;
};

struct GenerationStats {
  int generation = 0;
  double mean_fitness = 0.0;
  double mean_novelty = 0.0;
  double max_fitness = 0.0;
  std::optional<CorrelationProbe> probe;
};

struct RunTrace {
  GaConfig config;
  TaskInstance task;
  std::vector<GenerationStats> stats;  // N + 1 entries, generation 0 first
  Population final_population;
};

// Tournament-based GA: each generation every snapshot member produces one
// mutated offspring, which challenges a uniformly random slot of the live
// population; the offspring takes the slot when its internal fitness is >=
// the competitor's. Fully deterministic in (config.seed, task, policy).
// Probes fire at the end of each generation listed in `probe_generations`.
RunTrace run_ga(const GaConfig& config, const TaskInstance& task, const SelectionPolicy& policy,
                std::span<const int> probe_generations = {});

// Same loop without per-generation bookkeeping; returns the mean underlying
// fitness of the final population. Consumes the random stream identically to
// run_ga, so both paths yield bit-identical populations.
double run_ga_final_fitness(const GaConfig& config, const TaskInstance& task,
                            const SelectionPolicy& policy);

struct PolicySummary {
  std::string policy;
  std::string domain;
  int trials = 0;
  double fitness_mean = 0.0;
  double fitness_std = 0.0;
  double novelty_mean = 0.0;
  double novelty_std = 0.0;
  bool single_sample = false;  // trials == 1, reported std is degenerate
};

struct EvaluationResult {
  PolicySummary summary;
  std::vector<RunTrace> traces;
};

// Runs `trials` independent GA runs (fresh task and population each, streams
// derived from (config.seed, trial index)) and reports the mean and sample
// standard deviation of the final populations' mean fitness and novelty.
// Trial seeds do not depend on the policy, so evaluations under the same
// config seed are paired across policies.
EvaluationResult evaluate_policy(const SelectionPolicy& policy, DomainKind domain, int trials,
                                 const GaConfig& config, int threads = 1,
                                 std::span<const int> probe_generations = {});

}  // namespace sel4sel
