#include "sel4sel/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sel4sel/parallel.hpp"

namespace sel4sel {

void MetaConfig::validate() const {
  if (copies < 2) throw std::invalid_argument("copies must be >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  inner.validate();
}

std::vector<double> rank_weights(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n < 2) throw std::invalid_argument("rank_weights: need at least 2 scores");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ascending rank positions; ties share the mean of their tied positions.
  std::vector<double> raw(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j);  // mean of positions i..j
    for (std::size_t k = i; k <= j; ++k) raw[order[k]] = shared;
    i = j + 1;
  }

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  for (double& w : raw) w /= total;
  return raw;
}

PolicyParams rank_weighted_average(std::span<const PolicyParams> copies,
                                   std::span<const double> weights) {
  if (copies.empty() || copies.size() != weights.size()) {
    throw std::invalid_argument("rank_weighted_average: copies and weights must align");
  }
  const std::size_t dim = copies.front().values().size();
  std::vector<double> next(dim, 0.0);
  for (std::size_t c = 0; c < copies.size(); ++c) {
    const double w = weights[c];
    for (std::size_t i = 0; i < dim; ++i) next[i] += w * copies[c].values()[i];
  }
  // The update is a convex combination; keep each coordinate inside the
  // copies' hull against summation rounding.
  for (std::size_t i = 0; i < dim; ++i) {
    double lo = copies[0].values()[i];
    double hi = lo;
    for (std::size_t c = 1; c < copies.size(); ++c) {
      lo = std::min(lo, copies[c].values()[i]);
      hi = std::max(hi, copies[c].values()[i]);
    }
    next[i] = std::clamp(next[i], lo, hi);
  }
  return PolicyParams(copies.front().shapes(), std::move(next));
}

namespace {

PolicyParams combine_copies(const PolicyParams& theta, std::span<const PolicyParams> copies,
                            std::span<const double> weights, const MetaConfig& config) {
  if (config.gradient_update) {
    // Salimans-style additive step on centered rank weights.
    const std::size_t dim = theta.values().size();
    std::vector<double> next(theta.values().begin(), theta.values().end());
    const double mean_w = 1.0 / static_cast<double>(copies.size());
    for (std::size_t c = 0; c < copies.size(); ++c) {
      const double u = (weights[c] - mean_w) * config.gradient_step / config.sigma;
      for (std::size_t i = 0; i < dim; ++i) {
        next[i] += u * (copies[c].values()[i] - theta.values()[i]);
      }
    }
    return PolicyParams(theta.shapes(), std::move(next));
  }
  return rank_weighted_average(copies, weights);
}

}  // namespace

std::pair<PolicyParams, MetaIterationRecord> meta_step(const PolicyParams& theta,
                                                       const MetaConfig& config, int iteration) {
  const int copies = config.copies;
  std::vector<PolicyParams> perturbed(static_cast<std::size_t>(copies));
  std::vector<double> scores(static_cast<std::size_t>(copies));

  parallel_for(copies, config.threads, [&](int c) {
    Rng rng(derive_seed(config.master_seed,
                        {kSaltMetaCopy, static_cast<std::uint64_t>(iteration),
                         static_cast<std::uint64_t>(c)}));
    perturbed[static_cast<std::size_t>(c)] = perturb(theta, config.sigma, rng);
    const TaskInstance task = sample_task(config.domain, rng);
    GaConfig inner = config.inner;
    inner.seed = rng.next_u64();
    const SelectionPolicy policy =
        SelectionPolicy::network(perturbed[static_cast<std::size_t>(c)]);
    scores[static_cast<std::size_t>(c)] = run_ga_final_fitness(inner, task, policy);
  });

  const std::vector<double> weights = rank_weights(scores);
  PolicyParams next = combine_copies(theta, perturbed, weights, config);

  MetaIterationRecord record;
  record.iteration = iteration;
  record.scores = scores;
  record.score_best = *std::max_element(scores.begin(), scores.end());
  record.score_worst = *std::min_element(scores.begin(), scores.end());
  record.score_mean =
      std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(copies);
  return {std::move(next), std::move(record)};
}

CheckpointMeta make_checkpoint_meta(const MetaConfig& config, int iterations_completed) {
  CheckpointMeta meta;
  meta.domain = std::string(domain_name(config.domain));
  meta.iterations = config.iterations;
  meta.iterations_completed = iterations_completed;
  meta.copies = config.copies;
  meta.sigma = config.sigma;
  meta.init_scale = config.init_scale;
  meta.population_size = config.inner.population_size;
  meta.generations = config.inner.generations;
  meta.mutation_rate = config.inner.mutation_rate;
  meta.master_seed = config.master_seed;
  return meta;
}

namespace {

// Keras-style plateau detection on the smoothed mean copy score.
class EarlyStopMonitor {
 public:
  explicit EarlyStopMonitor(const EarlyStopConfig& config) : config_(config) {}

  // Returns true when training should stop after this iteration.
  bool observe(int iteration, double mean_copy_score) {
    if (!config_.enabled) return false;
    history_.push_back(mean_copy_score);
    if (static_cast<int>(history_.size()) < config_.window) return false;
    double window_sum = 0.0;
    for (std::size_t i = history_.size() - static_cast<std::size_t>(config_.window);
         i < history_.size(); ++i) {
      window_sum += history_[i];
    }
    const double smoothed = window_sum / config_.window;
    if (smoothed > best_smoothed_ + config_.min_delta) {
      best_smoothed_ = smoothed;
      last_improvement_ = iteration;
    }
    return iteration + 1 >= config_.min_iterations &&
           iteration - last_improvement_ >= config_.patience;
  }

 private:
  EarlyStopConfig config_;
  std::vector<double> history_;
  double best_smoothed_ = -std::numeric_limits<double>::infinity();
  int last_improvement_ = 0;
};

}  // namespace

TrainResult train_from(PolicyParams theta, int start_iteration, const MetaConfig& config) {
  config.validate();
  TrainResult result;
  result.trace.iterations.reserve(
      static_cast<std::size_t>(std::max(0, config.iterations - start_iteration)));
  EarlyStopMonitor monitor(config.early_stop);

  int completed = start_iteration;
  for (int iteration = start_iteration; iteration < config.iterations; ++iteration) {
    auto [next, record] = meta_step(theta, config, iteration);
    theta = std::move(next);
    completed = iteration + 1;
    const double mean_score = record.score_mean;
    result.trace.iterations.push_back(std::move(record));

    if (config.checkpoint_every > 0 && !config.checkpoint_path.empty() &&
        completed % config.checkpoint_every == 0) {
      save_checkpoint(config.checkpoint_path, {theta, make_checkpoint_meta(config, completed)});
    }
    if (monitor.observe(iteration, mean_score)) {
      result.early_stopped = true;
      break;
    }
  }

  result.params = std::move(theta);
  result.iterations_completed = completed;
  if (!config.checkpoint_path.empty()) {
    save_checkpoint(config.checkpoint_path,
                    {result.params, make_checkpoint_meta(config, completed)});
  }
  return result;
}

TrainResult train(const MetaConfig& config) {
  config.validate();
  Rng init_rng(derive_seed(config.master_seed, {kSaltPolicyInit}));
  PolicyParams theta = PolicyParams::random_init(config.shapes, config.init_scale, init_rng);
  return train_from(std::move(theta), 0, config);
}

TrainResult resume_training(const Checkpoint& checkpoint, const MetaConfig& config) {
  return train_from(checkpoint.params, checkpoint.meta.iterations_completed, config);
}

}  // namespace sel4sel
