#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llocg/bench/config.hpp"

namespace llocg::bench {

/// One CSV row: t,value,gap,regret,support,radius,oracle_calls.
struct TraceRow {
    int t = 0;
    double value = 0.0;
    std::optional<double> gap;
    std::optional<double> regret;
    std::size_t support = 0;
    std::optional<double> radius;
    long oracle_calls = 0;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<TraceRow> rows;
    double final_value = 0.0;
    std::optional<double> final_gap;
    std::optional<double> final_regret;
    std::optional<double> regret_bound;
    long oracle_calls = 0;
    long iterations = 0;
    /// One entry per enabled certification.
    std::map<std::string, bool> certified;
    std::optional<double> baseline_regret;
    std::vector<TraceRow> baseline_rows;
    double seconds = 0.0;
};

struct SummaryReport {
    std::string name;
    std::vector<SeedResult> seeds;
    double seconds = 0.0;
    bool all_certified() const;
};

struct RunOptions {
    /// Worker threads; 0 means one per logical core.
    unsigned jobs = 0;
    std::optional<RadiusSchedule> radius_schedule;
    /// Where CSVs go; nothing is written when unset.
    std::optional<std::filesystem::path> output_dir;
};

/// Runs one seed of an experiment (no file output).
SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs every seed on a bounded worker pool and writes
/// <name>_trace_seed<k>.csv (and <name>_baseline_trace_seed<k>.csv) plus
/// <name>_summary.csv. Output depends only on the config and seeds.
SummaryReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

std::string format_trace_csv(const std::vector<TraceRow>& rows);
/// seed,iterations,final_value,final_gap,final_regret,regret_bound,oracle_calls,baseline_regret,<certifications...>
std::string format_summary_csv(const SummaryReport& report, const std::vector<std::string>& certify);

}  // namespace llocg::bench
