#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sel4sel/engine.hpp"
#include "sel4sel/selection.hpp"

namespace sel4sel {

// Stops once the moving average of the mean copy score stops improving.
// (The best-copy score is unusable as a signal: with 20 copies some run
// reaches the 32.0 ceiling almost every iteration.)
struct EarlyStopConfig {
  bool enabled = true;
  int window = 100;         // moving-average width, iterations
  int min_iterations = 300; // never stop before this many iterations
  int patience = 300;       // iterations without improvement before stopping
  double min_delta = 0.1;   // smallest smoothed improvement that resets patience
};

struct MetaConfig {
  DomainKind domain = DomainKind::convex;
  int iterations = 1500;  // desk-scale default; the reference protocol uses 10,000
  int copies = 20;
  double sigma = 0.1;
  double init_scale = 0.1;
  LayerShapes shapes = PolicyParams::reference_shapes();
  GaConfig inner;  // inner.seed is ignored; copy streams derive from master_seed
  std::uint64_t master_seed = 0;
  int threads = 1;

  // Salimans-style additive step instead of the rank-weighted average.
  bool gradient_update = false;
  double gradient_step = 0.02;

  EarlyStopConfig early_stop;

  int checkpoint_every = 0;  // 0 disables periodic checkpoints
  std::filesystem::path checkpoint_path;

  void validate() const;
};

struct MetaIterationRecord {
  int iteration = 0;
  std::vector<double> scores;  // one per copy, in copy order
  double score_mean = 0.0;
  double score_best = 0.0;
  double score_worst = 0.0;
};

struct MetaTrace {
  std::vector<MetaIterationRecord> iterations;
};

// Ascending-rank weights: the worst copy gets raw weight 0, the best C-1,
// ties share the mean of their tied positions; normalized to sum to 1.
// Output is order-aligned with the input. Requires >= 2 scores.
std::vector<double> rank_weights(std::span<const double> scores);

// Weighted average of the copies (weights must sum to 1), clamped per
// coordinate to the copies' hull against summation rounding.
PolicyParams rank_weighted_average(std::span<const PolicyParams> copies,
                                   std::span<const double> weights);

// One outer iteration: C perturbed copies, each scored by a full inner GA run
// on a freshly sampled task, combined by rank weight. The update is clamped
// to the copies' coordinate-wise hull (it is a convex combination). Copies
// may evaluate concurrently; results are reduced in copy order.
std::pair<PolicyParams, MetaIterationRecord> meta_step(const PolicyParams& theta,
                                                       const MetaConfig& config, int iteration);

struct TrainResult {
  PolicyParams params;
  MetaTrace trace;
  int iterations_completed = 0;
  bool early_stopped = false;
};

CheckpointMeta make_checkpoint_meta(const MetaConfig& config, int iterations_completed);

// Full outer loop from a fresh Normal(0, init_scale) initialization.
// Reproducible from (master_seed, config) alone, regardless of thread count.
TrainResult train(const MetaConfig& config);

// Continues a run from `start_iteration` with the given parameters; because
// copy streams are derived from (master_seed, iteration, copy), the result is
// bit-identical to an uninterrupted run.
TrainResult train_from(PolicyParams theta, int start_iteration, const MetaConfig& config);

// Resumes from a saved checkpoint's parameters and completed-iteration count.
TrainResult resume_training(const Checkpoint& checkpoint, const MetaConfig& config);

}  // namespace sel4sel
