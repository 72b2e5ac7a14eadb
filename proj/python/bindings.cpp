#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sel4sel/analysis.hpp"
#include "sel4sel/engine.hpp"
#include "sel4sel/io.hpp"
#include "sel4sel/meta.hpp"
#include "sel4sel/selection.hpp"

namespace py = pybind11;
using namespace sel4sel;

namespace {

Genome genome_arg(const std::string& text) { return Genome::parse(text); }

SelectionPolicy make_policy(const std::string& spec,
                            const std::optional<std::vector<double>>& params) {
  if (spec == "fitness") return SelectionPolicy::underlying_fitness();
  if (spec == "novelty") return SelectionPolicy::novelty_search();
  if (spec == "mincrit") return SelectionPolicy::minimal_criterion();
  if (spec == "drift") return SelectionPolicy::random_drift();
  if (spec == "network") {
    if (!params) throw std::invalid_argument("policy 'network' requires params");
    return SelectionPolicy::network(PolicyParams(PolicyParams::reference_shapes(), *params));
  }
  constexpr std::string_view prefix = "sel4sel:";
  if (spec.rfind(prefix, 0) == 0) {
    return SelectionPolicy::network(load_checkpoint(spec.substr(prefix.size())).params);
  }
  throw std::invalid_argument("unknown policy '" + spec +
                              "'; valid: fitness, novelty, mincrit, drift, network, sel4sel:PATH");
}

py::object probe_to_py(const CorrelationProbe& probe) {
  auto opt = [](const std::optional<double>& v) -> py::object {
    return v ? py::cast(*v) : py::none();
  };
  py::dict d;
  d["generation"] = probe.generation;
  d["fitness"] = opt(probe.fitness);
  d["rank"] = opt(probe.rank);
  d["age"] = opt(probe.age);
  d["novelty"] = opt(probe.novelty);
  d["noise"] = opt(probe.noise);
  return d;
}

py::dict trace_to_py(const RunTrace& trace) {
  py::list stats;
  for (const GenerationStats& s : trace.stats) {
    py::dict row;
    row["generation"] = s.generation;
    row["mean_fitness"] = s.mean_fitness;
    row["mean_novelty"] = s.mean_novelty;
    row["max_fitness"] = s.max_fitness;
    row["probe"] = s.probe ? probe_to_py(*s.probe) : py::none();
    stats.append(row);
  }
  py::list members;
  for (const Individual& m : trace.final_population.members) {
    py::dict row;
    row["genome"] = m.genome.str();
    row["age"] = m.age;
    row["fitness"] = m.fitness;
    members.append(row);
  }
  py::dict task;
  task["domain_kind"] = std::string(domain_name(trace.task.kind));
  task["run_constant"] = trace.task.run_constant;
  py::dict out;
  out["task"] = task;
  out["stats"] = stats;
  out["final_population"] = members;
  return out;
}

py::dict summary_to_py(const PolicySummary& s) {
  py::dict d;
  d["policy"] = s.policy;
  d["domain"] = s.domain;
  d["trials"] = s.trials;
  d["fitness_mean"] = s.fitness_mean;
  d["fitness_std"] = s.fitness_std;
  d["novelty_mean"] = s.novelty_mean;
  d["novelty_std"] = s.novelty_std;
  d["single_sample"] = s.single_sample;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sel4Sel core: tournament GA, meta-evolved selection networks, analysis probes";

  m.def("random_genome", [](std::uint64_t seed) {
    Rng rng(seed);
    return random_genome(rng).str();
  }, py::arg("seed"));

  m.def("mutate", [](const std::string& genome, double rate, std::uint64_t seed) {
    Rng rng(seed);
    return mutate(genome_arg(genome), rate, rng).str();
  }, py::arg("genome"), py::arg("rate"), py::arg("seed"));

  m.def("hamming", [](const std::string& a, const std::string& b) {
    return hamming(genome_arg(a), genome_arg(b));
  }, py::arg("a"), py::arg("b"));

  m.def("convex_fitness", [](const std::string& g) { return convex_fitness(genome_arg(g)); },
        py::arg("genome"));
  m.def("deceptive_fitness", [](const std::string& g) { return deceptive_fitness(genome_arg(g)); },
        py::arg("genome"));
  m.def("hashed_fitness", [](std::uint64_t run_constant, const std::string& g) {
    return hashed_fitness(run_constant, genome_arg(g));
  }, py::arg("run_constant"), py::arg("genome"));
  m.def("hiff_fitness", [](const std::vector<int>& bits) {
    return hiff_fitness(bits);
  }, py::arg("bits"));
  m.def("fitness", [](const std::string& domain, std::uint64_t run_constant,
                      const std::string& g) {
    return fitness(TaskInstance{parse_domain(domain), run_constant}, genome_arg(g));
  }, py::arg("domain"), py::arg("run_constant"), py::arg("genome"));

  m.def("novelty", [](const std::string& genome, const std::vector<std::string>& population,
                      bool exclude_self, bool raw_sum) {
    Population pop;
    for (const std::string& g : population) pop.members.push_back({genome_arg(g), 0, 0.0});
    return novelty(genome_arg(genome), pop, exclude_self, raw_sum);
  }, py::arg("genome"), py::arg("population"), py::arg("exclude_self") = false,
     py::arg("raw_sum") = false);

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    const auto r = pearson(x, y);
    return r ? py::cast(*r) : py::object(py::none());
  }, py::arg("x"), py::arg("y"));

  m.def("rank_weights", [](const std::vector<double>& scores) { return rank_weights(scores); },
        py::arg("scores"));

  m.def("network_score", [](const std::vector<double>& params, const std::vector<double>& inputs,
                            const std::optional<std::vector<std::pair<int, int>>>& shapes) {
    LayerShapes layer_shapes;
    if (shapes) {
      for (auto [in, out] : *shapes) layer_shapes.push_back({in, out});
    } else {
      layer_shapes = PolicyParams::reference_shapes();
    }
    if (inputs.size() != 6) throw std::invalid_argument("network_score expects 6 inputs");
    FeatureVector fv{inputs[0], inputs[1], inputs[2], inputs[3], inputs[4], inputs[5]};
    return network_score(PolicyParams(std::move(layer_shapes), params), fv);
  }, py::arg("params"), py::arg("inputs"), py::arg("shapes") = py::none());

  m.def("run_ga", [](const std::string& domain, const std::string& policy, int pop_size,
                     int generations, double mutation_rate, std::uint64_t seed,
                     const std::vector<int>& probe_generations,
                     const std::optional<std::vector<double>>& params) {
    GaConfig config;
    config.population_size = pop_size;
    config.generations = generations;
    config.mutation_rate = mutation_rate;
    config.seed = seed;
    Rng rng(derive_seed(seed, {kSaltEvalTrial, 0}));
    const TaskInstance task = sample_task(parse_domain(domain), rng);
    config.seed = rng.next_u64();
    return trace_to_py(run_ga(config, task, make_policy(policy, params), probe_generations));
  }, py::arg("domain"), py::arg("policy"), py::arg("pop_size") = 50,
     py::arg("generations") = 2000, py::arg("mutation_rate") = 0.05, py::arg("seed") = 0,
     py::arg("probe_generations") = std::vector<int>{}, py::arg("params") = py::none());

  m.def("evaluate_policy", [](const std::string& domain, const std::string& policy, int trials,
                              int pop_size, int generations, double mutation_rate,
                              std::uint64_t seed, int threads,
                              const std::optional<std::vector<double>>& params) {
    GaConfig config;
    config.population_size = pop_size;
    config.generations = generations;
    config.mutation_rate = mutation_rate;
    config.seed = seed;
    const EvaluationResult result = evaluate_policy(make_policy(policy, params),
                                                    parse_domain(domain), trials, config, threads);
    return summary_to_py(result.summary);
  }, py::arg("domain"), py::arg("policy"), py::arg("trials") = 20, py::arg("pop_size") = 50,
     py::arg("generations") = 2000, py::arg("mutation_rate") = 0.05, py::arg("seed") = 0,
     py::arg("threads") = 1, py::arg("params") = py::none());

  m.def("train", [](const std::string& domain, int iterations, int copies, double sigma,
                    int pop_size, int generations, std::uint64_t seed, int threads,
                    bool early_stop) {
    MetaConfig config;
    config.domain = parse_domain(domain);
    config.iterations = iterations;
    config.copies = copies;
    config.sigma = sigma;
    config.inner.population_size = pop_size;
    config.inner.generations = generations;
    config.master_seed = seed;
    config.threads = threads;
    config.early_stop.enabled = early_stop;
    const TrainResult result = train(config);
    py::list trace;
    for (const MetaIterationRecord& r : result.trace.iterations) {
      py::dict row;
      row["iteration"] = r.iteration;
      row["score_mean"] = r.score_mean;
      row["score_best"] = r.score_best;
      row["score_worst"] = r.score_worst;
      trace.append(row);
    }
    py::dict out;
    out["params"] = std::vector<double>(result.params.values().begin(),
                                        result.params.values().end());
    out["iterations_completed"] = result.iterations_completed;
    out["early_stopped"] = result.early_stopped;
    out["trace"] = trace;
    return out;
  }, py::arg("domain"), py::arg("iterations") = 1500, py::arg("copies") = 20,
     py::arg("sigma") = 0.1, py::arg("pop_size") = 50, py::arg("generations") = 2000,
     py::arg("seed") = 0, py::arg("threads") = 1, py::arg("early_stop") = true);

  m.def("load_checkpoint_params", [](const std::string& path) {
    const Checkpoint c = load_checkpoint(path);
    py::dict out;
    out["params"] = std::vector<double>(c.params.values().begin(), c.params.values().end());
    out["domain"] = c.meta.domain;
    out["iterations_completed"] = c.meta.iterations_completed;
    out["master_seed"] = c.meta.master_seed;
    return out;
  }, py::arg("path"));
}
