#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "sel4sel/engine.hpp"
#include "sel4sel/io.hpp"

using namespace sel4sel;

namespace {

GaConfig small_config(int generations, std::uint64_t seed, int pop = 20) {
  GaConfig config;
  config.population_size = pop;
  config.generations = generations;
  config.seed = seed;
  return config;
}

std::multiset<std::uint16_t> genome_multiset(const Population& pop) {
  std::multiset<std::uint16_t> out;
  for (const Individual& member : pop.members) out.insert(member.genome.packed());
  return out;
}

}  // namespace

TEST_CASE("config violations abort before any evolution") {
  GaConfig bad;
  bad.population_size = 5;  // novelty needs 5 neighbors
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = GaConfig{};
  bad.mutation_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = GaConfig{};
  bad.generations = -1;
  CHECK_THROWS_AS(
      run_ga(bad, TaskInstance{DomainKind::convex, 0}, SelectionPolicy::underlying_fitness()),
      std::invalid_argument);
}

TEST_CASE("zero generations returns the untouched random population") {
  const GaConfig config = small_config(0, 99, 50);
  const RunTrace trace = run_ga(config, TaskInstance{DomainKind::convex, 0},
                                SelectionPolicy::underlying_fitness());
  REQUIRE(trace.stats.size() == 1);
  CHECK(trace.stats[0].generation == 0);
  CHECK(trace.final_population.members.size() == 50);
  // Same seed, fresh draw: the initial population is exactly reproducible.
  Rng rng(99);
  for (const Individual& member : trace.final_population.members) {
    CHECK(member.genome == random_genome(rng));
    CHECK(member.age == 0);
  }
}

TEST_CASE("trace covers N+1 generations and conserves population size") {
  const GaConfig config = small_config(40, 7);
  const RunTrace trace =
      run_ga(config, TaskInstance{DomainKind::deceptive, 0}, SelectionPolicy::random_drift());
  REQUIRE(trace.stats.size() == 41);
  for (int g = 0; g <= 40; ++g) CHECK(trace.stats[static_cast<std::size_t>(g)].generation == g);
  CHECK(trace.final_population.members.size() == 20);
  CHECK(trace.final_population.generation == 40);
  for (const GenerationStats& s : trace.stats) {
    CHECK(s.mean_fitness >= 0.0);
    CHECK(s.mean_fitness <= 32.0);
    CHECK(s.mean_novelty >= 0.0);
    CHECK(s.mean_novelty <= 16.0);
  }
}

TEST_CASE("identical seeds give bit-identical traces") {
  const GaConfig config = small_config(60, 4242);
  Rng task_rng(1);
  const TaskInstance task = sample_task(DomainKind::hashed, task_rng);
  for (const SelectionPolicy& policy :
       {SelectionPolicy::underlying_fitness(), SelectionPolicy::random_drift(),
        SelectionPolicy::network(PolicyParams::zeros())}) {
    const RunTrace a = run_ga(config, task, policy);
    const RunTrace b = run_ga(config, task, policy);
    CHECK(trace_to_csv(a) == trace_to_csv(b));
    CHECK(population_to_json(a.final_population) == population_to_json(b.final_population));
  }
}

TEST_CASE("final-fitness fast path equals the traced run") {
  const GaConfig config = small_config(80, 11);
  Rng task_rng(2);
  for (DomainKind domain : {DomainKind::convex, DomainKind::hashed, DomainKind::deceptive}) {
    const TaskInstance task = sample_task(domain, task_rng);
    const SelectionPolicy policy = SelectionPolicy::network(PolicyParams::zeros());
    const RunTrace traced = run_ga(config, task, policy);
    CHECK(run_ga_final_fitness(config, task, policy) == traced.stats.back().mean_fitness);
  }
}

TEST_CASE("max fitness never decreases under the fitness policy") {
  Rng task_rng(5);
  for (DomainKind domain : {DomainKind::convex, DomainKind::hashed, DomainKind::deceptive}) {
    const TaskInstance task = sample_task(domain, task_rng);
    const RunTrace trace =
        run_ga(small_config(200, 303), task, SelectionPolicy::underlying_fitness());
    for (std::size_t g = 1; g < trace.stats.size(); ++g) {
      REQUIRE(trace.stats[g].max_fitness >= trace.stats[g - 1].max_fitness);
    }
  }
}

TEST_CASE("zero mutation with fitness selection is monotone in mean fitness") {
  GaConfig config = small_config(150, 8, 50);
  config.mutation_rate = 0.0;
  const RunTrace trace =
      run_ga(config, TaskInstance{DomainKind::convex, 0}, SelectionPolicy::underlying_fitness());
  for (std::size_t g = 1; g < trace.stats.size(); ++g) {
    REQUIRE(trace.stats[g].mean_fitness >= trace.stats[g - 1].mean_fitness);
  }
}

TEST_CASE("ages increment for survivors and reset on replacement") {
  // With zero mutation and fitness selection every offspring ties its
  // competitor, so every tournament replaces its target with age 0; slots
  // never drawn that generation age by one.
  GaConfig config = small_config(1, 21, 50);
  config.mutation_rate = 0.0;
  const RunTrace trace =
      run_ga(config, TaskInstance{DomainKind::convex, 0}, SelectionPolicy::underlying_fitness());
  int fresh = 0;
  int aged = 0;
  for (const Individual& member : trace.final_population.members) {
    REQUIRE((member.age == 0 || member.age == 1));
    member.age == 0 ? ++fresh : ++aged;
  }
  // 50 uniform draws over 50 slots leave both replaced and untouched slots.
  CHECK(fresh > 0);
  CHECK(aged > 0);

  // Over many generations ages stay bounded by the generation counter. They
  // stay small even at convergence: identical offspring tie and keep
  // resetting their slot.
  const RunTrace longer = run_ga(small_config(120, 22, 50), TaskInstance{DomainKind::convex, 0},
                                 SelectionPolicy::underlying_fitness());
  int max_age = 0;
  for (const Individual& member : longer.final_population.members) {
    REQUIRE(member.age <= 120);
    max_age = std::max(max_age, member.age);
  }
  CHECK(max_age >= 1);
}

TEST_CASE("evaluate_policy pairs trials across policies by seed") {
  GaConfig config = small_config(0, 1714, 30);
  const EvaluationResult fitness_eval =
      evaluate_policy(SelectionPolicy::underlying_fitness(), DomainKind::hashed, 4, config);
  const EvaluationResult drift_eval =
      evaluate_policy(SelectionPolicy::random_drift(), DomainKind::hashed, 4, config);
  REQUIRE(fitness_eval.traces.size() == 4);
  for (std::size_t t = 0; t < 4; ++t) {
    // Same task constants and identical starting genomes per trial index.
    CHECK(fitness_eval.traces[t].task.run_constant == drift_eval.traces[t].task.run_constant);
    CHECK(genome_multiset(fitness_eval.traces[t].final_population) ==
          genome_multiset(drift_eval.traces[t].final_population));
  }
  // Distinct trials still differ from each other.
  CHECK(fitness_eval.traces[0].task.run_constant != fitness_eval.traces[1].task.run_constant);
}

TEST_CASE("evaluate_policy is independent of thread count") {
  GaConfig config = small_config(50, 5150, 20);
  const EvaluationResult serial =
      evaluate_policy(SelectionPolicy::random_drift(), DomainKind::deceptive, 6, config, 1);
  const EvaluationResult threaded =
      evaluate_policy(SelectionPolicy::random_drift(), DomainKind::deceptive, 6, config, 4);
  CHECK(serial.summary.fitness_mean == threaded.summary.fitness_mean);
  CHECK(serial.summary.novelty_mean == threaded.summary.novelty_mean);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(trace_to_csv(serial.traces[t]) == trace_to_csv(threaded.traces[t]));
  }
}

TEST_CASE("random drift on convex lands at the no-pressure level") {
  GaConfig config;
  config.population_size = 50;
  config.generations = 2000;
  config.seed = 616;
  const EvaluationResult result =
      evaluate_policy(SelectionPolicy::random_drift(), DomainKind::convex, 20, config);
  CHECK(result.summary.fitness_mean > 13.0);
  CHECK(result.summary.fitness_mean < 19.0);
}

TEST_CASE("single-trial summaries are flagged") {
  GaConfig config = small_config(20, 3, 20);
  const EvaluationResult result =
      evaluate_policy(SelectionPolicy::underlying_fitness(), DomainKind::convex, 1, config);
  CHECK(result.summary.single_sample);
  CHECK(result.summary.fitness_std == 0.0);
  CHECK(result.summary.novelty_std == 0.0);
}

TEST_CASE("probe generations attach probes to the requested stats rows") {
  GaConfig config = small_config(30, 88, 20);
  const std::vector<int> probe_gens{1, 15, 30};
  Rng task_rng(6);
  const TaskInstance task = sample_task(DomainKind::deceptive, task_rng);
  Rng init(55);
  const SelectionPolicy policy =
      SelectionPolicy::network(PolicyParams::random_init(PolicyParams::reference_shapes(), 0.4,
                                                         init));
  const RunTrace trace = run_ga(config, task, policy, probe_gens);
  for (int g = 0; g <= 30; ++g) {
    const bool expected = std::find(probe_gens.begin(), probe_gens.end(), g) != probe_gens.end();
    CHECK(trace.stats[static_cast<std::size_t>(g)].probe.has_value() == expected);
    if (expected) CHECK(trace.stats[static_cast<std::size_t>(g)].probe->generation == g);
  }
}
