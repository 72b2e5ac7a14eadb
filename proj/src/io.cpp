#include "sel4sel/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace sel4sel {

using nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = "generation,mean_fitness,mean_novelty,max_fitness\n";
  for (const GenerationStats& stats : trace.stats) {
    out += std::to_string(stats.generation);
    out += ',';
    out += format_double(stats.mean_fitness);
    out += ',';
    out += format_double(stats.mean_novelty);
    out += ',';
    out += format_double(stats.max_fitness);
    out += '\n';
  }
  return out;
}

std::string aggregate_to_csv(std::span<const TraceAggregatePoint> points) {
  std::string out = "generation,fitness_mean,fitness_std,novelty_mean,novelty_std\n";
  for (const TraceAggregatePoint& p : points) {
    out += std::to_string(p.generation);
    out += ',';
    out += format_double(p.fitness_mean);
    out += ',';
    out += format_double(p.fitness_std);
    out += ',';
    out += format_double(p.novelty_mean);
    out += ',';
    out += format_double(p.novelty_std);
    out += '\n';
  }
  return out;
}

std::string meta_trace_to_csv(const MetaTrace& trace) {
  std::string out = "iteration,score_mean,score_best,score_worst\n";
  for (const MetaIterationRecord& record : trace.iterations) {
    out += std::to_string(record.iteration);
    out += ',';
    out += format_double(record.score_mean);
    out += ',';
    out += format_double(record.score_best);
    out += ',';
    out += format_double(record.score_worst);
    out += '\n';
  }
  return out;
}

std::string summary_to_json(const PolicySummary& summary) {
  ordered_json j;
  j["policy"] = summary.policy;
  j["domain"] = summary.domain;
  j["trials"] = summary.trials;
  j["fitness_mean"] = summary.fitness_mean;
  j["fitness_std"] = summary.fitness_std;
  j["novelty_mean"] = summary.novelty_mean;
  j["novelty_std"] = summary.novelty_std;
  if (summary.single_sample) j["single_sample"] = true;
  return j.dump(2) + "\n";
}

std::string population_to_json(const Population& pop) {
  ordered_json j;
  j["generation"] = pop.generation;
  j["task"] = {{"domain_kind", std::string(domain_name(pop.task.kind))},
               {"run_constant", pop.task.run_constant}};
  ordered_json members = ordered_json::array();
  for (const Individual& member : pop.members) {
    members.push_back({{"genome", member.genome.str()},
                       {"age", member.age},
                       {"fitness", member.fitness}});
  }
  j["members"] = std::move(members);
  return j.dump(2) + "\n";
}

namespace {

ordered_json probe_row_to_json(const CorrelationProbe& row) {
  auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["generation"] = row.generation;
  j["fitness"] = opt(row.fitness);
  j["rank"] = opt(row.rank);
  j["age"] = opt(row.age);
  j["novelty"] = opt(row.novelty);
  j["noise"] = opt(row.noise);
  return j;
}

}  // namespace

std::string correlation_report_to_json(const CorrelationReport& report) {
  ordered_json j;
  j["domain"] = report.domain;
  j["checkpoint"] = report.checkpoint;
  j["trials"] = report.trials;
  if (report.domain_mismatch) {
    j["warning"] = "checkpoint was trained on a different domain";
  }
  ordered_json rows = ordered_json::array();
  for (const CorrelationProbe& row : report.rows) rows.push_back(probe_row_to_json(row));
  j["correlations"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string correlation_report_to_csv(const CorrelationReport& report) {
  std::string out = "generation,corr_fitness,corr_rank,corr_age,corr_novelty,corr_noise\n";
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const CorrelationProbe& row : report.rows) {
    out += std::to_string(row.generation);
    out += ',';
    out += cell(row.fitness);
    out += ',';
    out += cell(row.rank);
    out += ',';
    out += cell(row.age);
    out += ',';
    out += cell(row.novelty);
    out += ',';
    out += cell(row.noise);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace sel4sel
