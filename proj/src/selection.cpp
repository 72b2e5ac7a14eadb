#include "sel4sel/selection.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "sel4sel/io.hpp"

namespace sel4sel {

namespace {

void check_shapes(const LayerShapes& shapes) {
  if (shapes.empty()) throw std::invalid_argument("policy shapes must not be empty");
  for (const LayerShape& s : shapes) {
    if (s.inputs <= 0 || s.outputs <= 0) {
      throw std::invalid_argument("policy layer sizes must be positive");
    }
  }
  for (std::size_t i = 1; i < shapes.size(); ++i) {
    if (shapes[i].inputs != shapes[i - 1].outputs) {
      throw std::invalid_argument("policy layer shapes do not chain");
    }
  }
}

// Forward pass over the flat layout: per layer, weights row-major then
// biases. Hidden activations tanh, output linear.
double forward(const PolicyParams& params, const FeatureVector& fv, std::vector<double>& front,
               std::vector<double>& back) {
  const LayerShapes& shapes = params.shapes();
  if (shapes.front().inputs != 6) {
    throw std::invalid_argument("selection network expects 6 inputs");
  }
  front.assign({fv.fitness_norm, fv.rank_norm, fv.age_norm, fv.novelty_norm, fv.noise,
                fv.generation_norm});
  const double* p = params.values().data();
  for (std::size_t layer = 0; layer < shapes.size(); ++layer) {
    const int in = shapes[layer].inputs;
    const int out = shapes[layer].outputs;
    const double* weights = p;
    const double* biases = p + static_cast<std::size_t>(in) * out;
    p = biases + out;
    back.resize(static_cast<std::size_t>(out));
    const bool hidden = layer + 1 < shapes.size();
    for (int o = 0; o < out; ++o) {
      const double* row = weights + static_cast<std::size_t>(o) * in;
      double acc = biases[o];
      for (int i = 0; i < in; ++i) acc += row[i] * front[static_cast<std::size_t>(i)];
      back[static_cast<std::size_t>(o)] = hidden ? std::tanh(acc) : acc;
    }
    std::swap(front, back);
  }
  if (shapes.back().outputs != 1) {
    throw std::invalid_argument("selection network must end in a single output");
  }
  return front[0];
}

}  // namespace

PolicyParams::PolicyParams(LayerShapes shapes, std::vector<double> values)
    : shapes_(std::move(shapes)), values_(std::move(values)) {
  check_shapes(shapes_);
  const std::size_t expected = value_count(shapes_);
  if (values_.size() != expected) {
    throw std::invalid_argument("policy parameter count mismatch: expected " +
                                std::to_string(expected) + ", got " +
                                std::to_string(values_.size()));
  }
}

LayerShapes PolicyParams::reference_shapes() { return {{6, 16}, {16, 16}, {16, 1}}; }

std::size_t PolicyParams::value_count(const LayerShapes& shapes) {
  std::size_t n = 0;
  for (const LayerShape& s : shapes) {
    n += static_cast<std::size_t>(s.inputs) * static_cast<std::size_t>(s.outputs) +
         static_cast<std::size_t>(s.outputs);
  }
  return n;
}

PolicyParams PolicyParams::zeros(const LayerShapes& shapes) {
  return PolicyParams(shapes, std::vector<double>(value_count(shapes), 0.0));
}

PolicyParams PolicyParams::random_init(const LayerShapes& shapes, double scale, Rng& rng) {
  std::vector<double> values(value_count(shapes));
  for (double& v : values) v = rng.normal(0.0, scale);
  return PolicyParams(shapes, std::move(values));
}

double network_score(const PolicyParams& params, const FeatureVector& features) {
  std::vector<double> front;
  std::vector<double> back;
  return forward(params, features, front, back);
}

PolicyParams perturb(const PolicyParams& params, double sigma, Rng& rng) {
  std::vector<double> values(params.values().begin(), params.values().end());
  for (double& v : values) v += rng.normal(0.0, 1.0) * sigma;
  return PolicyParams(params.shapes(), std::move(values));
}

SelectionPolicy SelectionPolicy::network(PolicyParams params) {
  return SelectionPolicy(PolicyKind::network, std::move(params), kMinimalCriterionCap);
}
SelectionPolicy SelectionPolicy::underlying_fitness() {
  return SelectionPolicy(PolicyKind::underlying_fitness, {}, kMinimalCriterionCap);
}
SelectionPolicy SelectionPolicy::novelty_search() {
  return SelectionPolicy(PolicyKind::novelty, {}, kMinimalCriterionCap);
}
SelectionPolicy SelectionPolicy::minimal_criterion(double cap) {
  return SelectionPolicy(PolicyKind::minimal_criterion, {}, cap);
}
SelectionPolicy SelectionPolicy::random_drift() {
  return SelectionPolicy(PolicyKind::random_drift, {}, kMinimalCriterionCap);
}

std::string_view SelectionPolicy::label() const {
  switch (kind_) {
    case PolicyKind::network: return "sel4sel";
    case PolicyKind::underlying_fitness: return "fitness";
    case PolicyKind::novelty: return "novelty";
    case PolicyKind::minimal_criterion: return "mincrit";
    case PolicyKind::random_drift: return "drift";
  }
  throw std::logic_error("unreachable policy kind");
}

double SelectionPolicy::internal_fitness(const Individual& ind, bool is_member,
                                         const Population& pop, int total_generations, Rng& rng,
                                         bool novelty_raw_sum) const {
  PolicyScorer scorer(*this, novelty_raw_sum);
  return scorer.internal_fitness(ind, is_member, pop, total_generations, rng);
}

PolicyScorer::PolicyScorer(const SelectionPolicy& policy, bool novelty_raw_sum)
    : policy_(&policy), novelty_raw_sum_(novelty_raw_sum) {}

double PolicyScorer::score_features(const FeatureVector& features) {
  return forward(policy_->params(), features, front_, back_);
}

double PolicyScorer::internal_fitness(const Individual& ind, bool is_member,
                                      const Population& pop, int total_generations, Rng& rng) {
  switch (policy_->kind()) {
    case PolicyKind::network:
      return score_features(
          extract_features(ind, is_member, pop, total_generations, rng, novelty_raw_sum_));
    case PolicyKind::underlying_fitness:
      return ind.fitness;
    case PolicyKind::novelty:
      return novelty(ind.genome, pop, is_member, novelty_raw_sum_);
    case PolicyKind::minimal_criterion:
      return std::min(ind.fitness, policy_->criterion_cap());
    case PolicyKind::random_drift:
      return rng.uniform();
  }
  throw std::logic_error("unreachable policy kind");
}

namespace {

using nlohmann::ordered_json;

ordered_json shapes_to_json(const LayerShapes& shapes) {
  ordered_json out = ordered_json::array();
  for (const LayerShape& s : shapes) out.push_back({s.inputs, s.outputs});
  return out;
}

template <typename T>
T require_field(const ordered_json& j, const char* field) {
  if (!j.contains(field)) {
    throw std::runtime_error(std::string("checkpoint: missing field '") + field + "'");
  }
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error(std::string("checkpoint: malformed field '") + field + "'");
  }
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  ordered_json j;
  j["format"] = "sel4sel-checkpoint-v1";
  j["layer_shapes"] = shapes_to_json(checkpoint.params.shapes());
  j["params"] = std::vector<double>(checkpoint.params.values().begin(),
                                    checkpoint.params.values().end());
  ordered_json meta;
  meta["domain"] = checkpoint.meta.domain;
  meta["iterations"] = checkpoint.meta.iterations;
  meta["iterations_completed"] = checkpoint.meta.iterations_completed;
  meta["copies"] = checkpoint.meta.copies;
  meta["sigma"] = checkpoint.meta.sigma;
  meta["init_scale"] = checkpoint.meta.init_scale;
  meta["population_size"] = checkpoint.meta.population_size;
  meta["generations"] = checkpoint.meta.generations;
  meta["mutation_rate"] = checkpoint.meta.mutation_rate;
  meta["master_seed"] = checkpoint.meta.master_seed;
  j["metadata"] = std::move(meta);
  return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  const auto raw_shapes = require_field<std::vector<std::vector<int>>>(j, "layer_shapes");
  LayerShapes shapes;
  for (const auto& pair : raw_shapes) {
    if (pair.size() != 2) {
      throw std::runtime_error("checkpoint: malformed field 'layer_shapes'");
    }
    shapes.push_back({pair[0], pair[1]});
  }
  auto values = require_field<std::vector<double>>(j, "params");
  const std::size_t expected = PolicyParams::value_count(shapes);
  if (values.size() != expected) {
    throw std::runtime_error("checkpoint: field 'params' has " + std::to_string(values.size()) +
                             " entries, layer_shapes require " + std::to_string(expected));
  }
  Checkpoint out{PolicyParams(std::move(shapes), std::move(values)), {}};
  const ordered_json meta = require_field<ordered_json>(j, "metadata");
  out.meta.domain = require_field<std::string>(meta, "domain");
  out.meta.iterations = require_field<int>(meta, "iterations");
  out.meta.iterations_completed = require_field<int>(meta, "iterations_completed");
  out.meta.copies = require_field<int>(meta, "copies");
  out.meta.sigma = require_field<double>(meta, "sigma");
  out.meta.init_scale = require_field<double>(meta, "init_scale");
  out.meta.population_size = require_field<int>(meta, "population_size");
  out.meta.generations = require_field<int>(meta, "generations");
  out.meta.mutation_rate = require_field<double>(meta, "mutation_rate");
  out.meta.master_seed = require_field<std::uint64_t>(meta, "master_seed");
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_text_file(path, checkpoint_to_json(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_text_file(path));
}

}  // namespace sel4sel
