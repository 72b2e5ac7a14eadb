#include "sel4sel/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace sel4sel {

namespace {

struct Welford {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double sample_std() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(n) * m * m) / (n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

std::vector<TraceAggregatePoint> aggregate_traces(std::span<const RunTrace> traces) {
  if (traces.empty()) {
    throw std::invalid_argument("aggregate_traces: no traces");
  }
  const std::size_t length = traces.front().stats.size();
  for (const RunTrace& trace : traces) {
    if (trace.stats.size() != length) {
      throw std::invalid_argument("aggregate_traces: traces have mixed lengths");
    }
  }
  std::vector<TraceAggregatePoint> out(length);
  for (std::size_t g = 0; g < length; ++g) {
    Welford fitness;
    Welford novelty;
    for (const RunTrace& trace : traces) {
      fitness.add(trace.stats[g].mean_fitness);
      novelty.add(trace.stats[g].mean_novelty);
    }
    out[g].generation = traces.front().stats[g].generation;
    out[g].fitness_mean = fitness.mean();
    out[g].fitness_std = fitness.sample_std();
    out[g].novelty_mean = novelty.mean();
    out[g].novelty_std = novelty.sample_std();
  }
  return out;
}

namespace {

struct OptionalMean {
  double sum = 0.0;
  int n = 0;
  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

}  // namespace

std::vector<CorrelationProbe> average_probes(std::span<const RunTrace> traces) {
  if (traces.empty()) {
    throw std::invalid_argument("average_probes: no traces");
  }
  std::vector<int> generations;
  for (const GenerationStats& stats : traces.front().stats) {
    if (stats.probe) generations.push_back(stats.generation);
  }
  std::vector<CorrelationProbe> rows;
  rows.reserve(generations.size());
  for (int gen : generations) {
    OptionalMean fitness;
    OptionalMean rank;
    OptionalMean age;
    OptionalMean novelty;
    OptionalMean noise;
    for (const RunTrace& trace : traces) {
      const GenerationStats& stats = trace.stats.at(static_cast<std::size_t>(gen));
      if (!stats.probe || stats.probe->generation != gen) {
        throw std::invalid_argument("average_probes: traces were probed at different generations");
      }
      fitness.add(stats.probe->fitness);
      rank.add(stats.probe->rank);
      age.add(stats.probe->age);
      novelty.add(stats.probe->novelty);
      noise.add(stats.probe->noise);
    }
    CorrelationProbe row;
    row.generation = gen;
    row.fitness = fitness.mean();
    row.rank = rank.mean();
    row.age = age.mean();
    row.novelty = novelty.mean();
    row.noise = noise.mean();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sel4sel
