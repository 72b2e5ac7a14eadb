#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sel4sel/population.hpp"
#include "sel4sel/rng.hpp"

namespace sel4sel {

struct LayerShape {
  int inputs = 0;
  int outputs = 0;
  friend constexpr bool operator==(LayerShape, LayerShape) = default;
};

using LayerShapes = std::vector<LayerShape>;

// Flat parameter vector for the selection network plus its layer metadata.
// Serialization order is layer by layer: weights row-major (one row per
// output neuron), then biases. The reference shapes give 401 parameters.
class PolicyParams {
 public:
  PolicyParams() = default;
  // Throws std::invalid_argument on shape/value-count mismatch.
  PolicyParams(LayerShapes shapes, std::vector<double> values);

  static LayerShapes reference_shapes();  // {6,16} -> {16,16} -> {16,1}
  static std::size_t value_count(const LayerShapes& shapes);

  static PolicyParams zeros(const LayerShapes& shapes = reference_shapes());
  // Every parameter ~ Normal(0, scale), consumed in flat order.
  static PolicyParams random_init(const LayerShapes& shapes, double scale, Rng& rng);

  const LayerShapes& shapes() const { return shapes_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;

 private:
  LayerShapes shapes_;
  std::vector<double> values_;
};

// Feedforward pass: tanh on hidden layers, linear output. Deterministic in
// (params, features); all stochasticity lives in the noise feature.
double network_score(const PolicyParams& params, const FeatureVector& features);

// Adds an independent Normal(0, 1) * sigma to each parameter; the input is
// untouched. Draws are consumed in flat serialization order.
PolicyParams perturb(const PolicyParams& params, double sigma, Rng& rng);

enum class PolicyKind { network, underlying_fitness, novelty, minimal_criterion, random_drift };

inline constexpr double kMinimalCriterionCap = 16.0;

// A selection policy maps (individual, population context) to a scalar
// internal fitness used for tournament comparisons.
class SelectionPolicy {
 public:
  static SelectionPolicy network(PolicyParams params);
  static SelectionPolicy underlying_fitness();
  static SelectionPolicy novelty_search();
  static SelectionPolicy minimal_criterion(double cap = kMinimalCriterionCap);
  static SelectionPolicy random_drift();

  PolicyKind kind() const { return kind_; }
  const PolicyParams& params() const { return params_; }
  double criterion_cap() const { return cap_; }
  std::string_view label() const;

  // Convenience entry point; engine hot paths use PolicyScorer instead.
  double internal_fitness(const Individual& ind, bool is_member, const Population& pop,
                          int total_generations, Rng& rng, bool novelty_raw_sum = false) const;

 private:
  SelectionPolicy(PolicyKind kind, PolicyParams params, double cap)
      : kind_(kind), params_(std::move(params)), cap_(cap) {}

  PolicyKind kind_ = PolicyKind::underlying_fitness;
  PolicyParams params_;
  double cap_ = kMinimalCriterionCap;
};

// Reusable scoring context: owns the network scratch buffers so per-call heap
// traffic stays off the tournament hot path.
class PolicyScorer {
 public:
  explicit PolicyScorer(const SelectionPolicy& policy, bool novelty_raw_sum = false);

  double internal_fitness(const Individual& ind, bool is_member, const Population& pop,
                          int total_generations, Rng& rng);

  // Network forward pass reusing this scorer's buffers.
  double score_features(const FeatureVector& features);

 private:
  const SelectionPolicy* policy_;
  bool novelty_raw_sum_;
  std::vector<double> front_;
  std::vector<double> back_;
};

// Checkpoint document: parameters plus enough metadata to reproduce or resume
// the training run that produced them.
struct CheckpointMeta {
  std::string domain;
  int iterations = 0;            // configured outer iterations
  int iterations_completed = 0;  // outer iterations actually run
  int copies = 0;
  double sigma = 0.0;
  double init_scale = 0.0;
  int population_size = 0;
  int generations = 0;
  double mutation_rate = 0.0;
  std::uint64_t master_seed = 0;
};

struct Checkpoint {
  PolicyParams params;
  CheckpointMeta meta;
};

std::string checkpoint_to_json(const Checkpoint& checkpoint);
// Throws std::runtime_error naming the offending field on malformed input.
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sel4sel
