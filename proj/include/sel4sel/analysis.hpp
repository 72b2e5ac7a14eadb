#pragma once

#include <span>
#include <string>
#include <vector>

#include "sel4sel/engine.hpp"

namespace sel4sel {

struct TraceAggregatePoint {
  int generation = 0;
  double fitness_mean = 0.0;
  double fitness_std = 0.0;
  double novelty_mean = 0.0;
  double novelty_std = 0.0;
};

// Element-wise mean and sample standard deviation of mean_fitness and
// mean_novelty across trials. Throws std::invalid_argument on mixed trace
// lengths or an empty input.
std::vector<TraceAggregatePoint> aggregate_traces(std::span<const RunTrace> traces);

// One probe row averaged across trials: per metric, the mean over the trials
// where the correlation was defined; undefined when no trial defined it.
struct CorrelationReport {
  std::string domain;
  std::string checkpoint;  // label or path of the probed policy
  int trials = 0;
  std::vector<CorrelationProbe> rows;  // one per probe generation, ascending
  bool domain_mismatch = false;        // checkpoint was trained on another domain
};

// Averages the probes embedded in the traces (which must have been produced
// with matching probe generations).
std::vector<CorrelationProbe> average_probes(std::span<const RunTrace> traces);

}  // namespace sel4sel
