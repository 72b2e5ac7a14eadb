#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "sel4sel/analysis.hpp"
#include "sel4sel/engine.hpp"
#include "sel4sel/meta.hpp"

namespace sel4sel {

// Shortest round-trip decimal rendering ('.' separator, no locale).
std::string format_double(double value);

// CSV: generation,mean_fitness,mean_novelty,max_fitness
std::string trace_to_csv(const RunTrace& trace);

// CSV: generation,fitness_mean,fitness_std,novelty_mean,novelty_std
std::string aggregate_to_csv(std::span<const TraceAggregatePoint> points);

// CSV: iteration,score_mean,score_best,score_worst
std::string meta_trace_to_csv(const MetaTrace& trace);

// JSON: {policy, domain, trials, fitness_mean, fitness_std, novelty_mean,
// novelty_std} plus single_sample when trials == 1.
std::string summary_to_json(const PolicySummary& summary);

// JSON: {generation, task, members: [{genome, age, fitness}, ...]}.
std::string population_to_json(const Population& pop);

// JSON report with one row per probe generation; undefined correlations
// serialize as null. CSV mirror:
// generation,corr_fitness,corr_rank,corr_age,corr_novelty,corr_noise
// with empty fields for undefined entries.
std::string correlation_report_to_json(const CorrelationReport& report);
std::string correlation_report_to_csv(const CorrelationReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace sel4sel
