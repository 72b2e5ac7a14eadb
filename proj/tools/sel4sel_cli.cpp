#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sel4sel/analysis.hpp"
#include "sel4sel/engine.hpp"
#include "sel4sel/io.hpp"
#include "sel4sel/meta.hpp"
#include "sel4sel/parallel.hpp"
#include "sel4sel/selection.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sel4sel;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

struct NamedPolicy {
  std::string label;
  SelectionPolicy policy;
};

NamedPolicy parse_policy_spec(const std::string& spec) {
  if (spec == "fitness") return {"fitness", SelectionPolicy::underlying_fitness()};
  if (spec == "novelty") return {"novelty", SelectionPolicy::novelty_search()};
  if (spec == "mincrit") return {"mincrit", SelectionPolicy::minimal_criterion()};
  if (spec == "drift") return {"drift", SelectionPolicy::random_drift()};
  constexpr std::string_view prefix = "sel4sel:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string path = spec.substr(prefix.size());
    return {"sel4sel", SelectionPolicy::network(load_checkpoint(path).params)};
  }
  throw std::invalid_argument("unknown policy '" + spec +
                              "'; valid: fitness, novelty, mincrit, drift, sel4sel:PATH");
}

// Execution-resource flags (threads) stay out of manifests: they cannot
// affect results and outputs must be byte-identical across worker counts.
void write_manifest(const fs::path& path, ordered_json manifest) {
  write_text_file(path, manifest.dump(2) + "\n");
}

struct TrainArgs {
  std::string domain;
  int iterations = 1500;
  int copies = 20;
  double sigma = 0.1;
  int pop_size = 50;
  int generations = 2000;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  int checkpoint_every = 0;
  std::string resume;
};

int run_train(const TrainArgs& args) {
  MetaConfig config;
  config.domain = parse_domain(args.domain);
  config.iterations = args.iterations;
  config.copies = args.copies;
  config.sigma = args.sigma;
  config.inner.population_size = args.pop_size;
  config.inner.generations = args.generations;
  config.master_seed = args.seed;
  config.threads = args.threads;
  config.checkpoint_every = args.checkpoint_every;
  config.checkpoint_path = args.out;
  config.validate();

  TrainResult result;
  if (!args.resume.empty()) {
    const Checkpoint checkpoint = load_checkpoint(args.resume);
    std::cerr << "resuming from " << args.resume << " at iteration "
              << checkpoint.meta.iterations_completed << "\n";
    result = resume_training(checkpoint, config);
  } else {
    result = train(config);
  }

  fs::path out_path(args.out);
  save_checkpoint(out_path, {result.params, make_checkpoint_meta(config,
                                                                 result.iterations_completed)});
  fs::path trace_path = out_path;
  trace_path.replace_extension(".trace.csv");
  write_text_file(trace_path, meta_trace_to_csv(result.trace));

  ordered_json manifest;
  manifest["command"] = "train";
  manifest["domain"] = args.domain;
  manifest["iterations"] = args.iterations;
  manifest["copies"] = args.copies;
  manifest["sigma"] = args.sigma;
  manifest["pop_size"] = args.pop_size;
  manifest["generations"] = args.generations;
  manifest["mutation_rate"] = config.inner.mutation_rate;
  manifest["seed"] = args.seed;
  manifest["checkpoint_every"] = args.checkpoint_every;
  manifest["out"] = args.out;
  fs::path manifest_path = out_path;
  manifest_path.replace_extension(".manifest.json");
  write_manifest(manifest_path, std::move(manifest));

  std::cerr << "trained " << result.iterations_completed << " iterations"
            << (result.early_stopped ? " (early stop)" : "") << ", checkpoint at " << args.out
            << "\n";
  return 0;
}

struct CompareArgs {
  std::string domain;
  std::string policies;
  int trials = 20;
  int pop_size = 50;
  int generations = 2000;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

int run_compare(const CompareArgs& args) {
  const DomainKind domain = parse_domain(args.domain);
  std::vector<NamedPolicy> policies;
  std::map<std::string, int> label_uses;
  for (const std::string& spec : split_csv(args.policies)) {
    if (spec.empty()) continue;
    NamedPolicy named = parse_policy_spec(spec);
    const int uses = ++label_uses[named.label];
    if (uses > 1) named.label += "_" + std::to_string(uses);
    policies.push_back(std::move(named));
  }
  if (policies.empty()) throw std::invalid_argument("--policies must name at least one policy");

  GaConfig config;
  config.population_size = args.pop_size;
  config.generations = args.generations;
  config.seed = args.seed;
  config.validate();

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  ordered_json summary;
  summary["domain"] = args.domain;
  summary["trials"] = args.trials;
  summary["pop_size"] = args.pop_size;
  summary["generations"] = args.generations;
  summary["seed"] = args.seed;
  ordered_json rows = ordered_json::array();

  std::cout << "policy          fitness             novelty\n";
  for (const NamedPolicy& named : policies) {
    const EvaluationResult result =
        evaluate_policy(named.policy, domain, args.trials, config, args.threads);
    PolicySummary row = result.summary;
    row.policy = named.label;
    rows.push_back(ordered_json::parse(summary_to_json(row)));

    const auto aggregate = aggregate_traces(result.traces);
    write_text_file(out_dir / (named.label + "_aggregate.csv"), aggregate_to_csv(aggregate));
    for (std::size_t t = 0; t < result.traces.size(); ++t) {
      std::string idx = std::to_string(t);
      idx.insert(0, idx.size() < 3 ? 3 - idx.size() : 0, '0');
      write_text_file(out_dir / (named.label + "_trial_" + idx + ".csv"),
                      trace_to_csv(result.traces[t]));
    }

    std::cout << named.label << std::string(named.label.size() < 15 ? 15 - named.label.size() : 1, ' ')
              << format_double(row.fitness_mean) << " +- " << format_double(row.fitness_std)
              << "   " << format_double(row.novelty_mean) << " +- "
              << format_double(row.novelty_std) << "\n";
  }
  summary["policies"] = std::move(rows);
  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");

  ordered_json manifest;
  manifest["command"] = "compare";
  manifest["domain"] = args.domain;
  manifest["policies"] = args.policies;
  manifest["trials"] = args.trials;
  manifest["pop_size"] = args.pop_size;
  manifest["generations"] = args.generations;
  manifest["mutation_rate"] = config.mutation_rate;
  manifest["seed"] = args.seed;
  manifest["out"] = args.out;
  write_manifest(out_dir / "manifest.json", std::move(manifest));
  return 0;
}

struct AnalyzeArgs {
  std::string domain;
  std::string checkpoint;
  int trials = 20;
  std::string probe_gens = "1,100,500,1000,2000";
  std::uint64_t seed = 0;
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  const DomainKind domain = parse_domain(args.domain);
  const Checkpoint checkpoint = load_checkpoint(args.checkpoint);

  std::vector<int> probe_gens;
  for (const std::string& field : split_csv(args.probe_gens)) {
    if (field.empty()) continue;
    probe_gens.push_back(std::stoi(field));
  }
  if (probe_gens.empty()) throw std::invalid_argument("--probe-gens must name at least one generation");

  GaConfig config;
  config.population_size = checkpoint.meta.population_size;
  config.generations = checkpoint.meta.generations;
  config.mutation_rate = checkpoint.meta.mutation_rate;
  config.seed = args.seed;
  config.validate();
  for (int gen : probe_gens) {
    if (gen < 1 || gen > config.generations) {
      throw std::invalid_argument("probe generation " + std::to_string(gen) +
                                  " outside [1, " + std::to_string(config.generations) + "]");
    }
  }

  CorrelationReport report;
  report.domain = args.domain;
  report.checkpoint = args.checkpoint;
  report.trials = args.trials;
  report.domain_mismatch = checkpoint.meta.domain != args.domain;
  if (report.domain_mismatch) {
    std::cerr << "warning: checkpoint was trained on '" << checkpoint.meta.domain
              << "' but --domain is '" << args.domain << "'; proceeding\n";
  }

  const SelectionPolicy policy = SelectionPolicy::network(checkpoint.params);
  const EvaluationResult result =
      evaluate_policy(policy, domain, args.trials, config, /*threads=*/0, probe_gens);
  report.rows = average_probes(result.traces);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  write_text_file(out_dir / "correlations.json", correlation_report_to_json(report));
  write_text_file(out_dir / "correlations.csv", correlation_report_to_csv(report));

  ordered_json manifest;
  manifest["command"] = "analyze";
  manifest["domain"] = args.domain;
  manifest["checkpoint"] = args.checkpoint;
  manifest["trials"] = args.trials;
  manifest["probe_gens"] = args.probe_gens;
  manifest["pop_size"] = config.population_size;
  manifest["generations"] = config.generations;
  manifest["mutation_rate"] = config.mutation_rate;
  manifest["seed"] = args.seed;
  manifest["out"] = args.out;
  write_manifest(out_dir / "manifest.json", std::move(manifest));

  std::cout << correlation_report_to_csv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sel4Sel: meta-evolved selection functions for tournament GAs"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "meta-evolve a selection network");
  train_cmd->add_option("--domain", train_args.domain, "convex|hashed|deceptive")->required();
  train_cmd->add_option("--iterations", train_args.iterations, "outer ES iterations");
  train_cmd->add_option("--copies", train_args.copies, "perturbed copies per iteration");
  train_cmd->add_option("--sigma", train_args.sigma, "perturbation scale");
  train_cmd->add_option("--pop-size", train_args.pop_size, "inner GA population size");
  train_cmd->add_option("--generations", train_args.generations, "inner GA generations");
  train_cmd->add_option("--seed", train_args.seed, "master seed");
  train_cmd->add_option("--out", train_args.out, "checkpoint output path")->required();
  train_cmd->add_option("--threads", train_args.threads, "worker cap (0 = hardware)");
  train_cmd->add_option("--checkpoint-every", train_args.checkpoint_every,
                        "periodic checkpoint interval (iterations)");
  train_cmd->add_option("--resume", train_args.resume, "checkpoint to resume from");

  CompareArgs compare_args;
  CLI::App* compare_cmd = app.add_subcommand("compare", "evaluate selection policies side by side");
  compare_cmd->add_option("--domain", compare_args.domain, "convex|hashed|deceptive")->required();
  compare_cmd->add_option("--policies", compare_args.policies,
                          "comma list: fitness|novelty|mincrit|drift|sel4sel:PATH")->required();
  compare_cmd->add_option("--trials", compare_args.trials, "independent trials per policy");
  compare_cmd->add_option("--pop-size", compare_args.pop_size, "GA population size");
  compare_cmd->add_option("--generations", compare_args.generations, "GA generations");
  compare_cmd->add_option("--seed", compare_args.seed, "master seed (shared across policies)");
  compare_cmd->add_option("--out", compare_args.out, "output directory")->required();
  compare_cmd->add_option("--threads", compare_args.threads, "worker cap (0 = hardware)");

  AnalyzeArgs analyze_args;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "correlate network inputs with scores");
  analyze_cmd->add_option("--domain", analyze_args.domain, "convex|hashed|deceptive")->required();
  analyze_cmd->add_option("--checkpoint", analyze_args.checkpoint, "trained checkpoint")->required();
  analyze_cmd->add_option("--trials", analyze_args.trials, "test trials to average over");
  analyze_cmd->add_option("--probe-gens", analyze_args.probe_gens, "comma list of generations");
  analyze_cmd->add_option("--seed", analyze_args.seed, "master seed");
  analyze_cmd->add_option("--out", analyze_args.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(train_args);
    if (compare_cmd->parsed()) return run_compare(compare_args);
    if (analyze_cmd->parsed()) return run_analyze(analyze_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
