// runner.hpp — Config-level drivers shared by the CLI and the Python module:
// single runs, T_c sweeps and envelope optimization, plus their file outputs.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dekohere/config.hpp"
#include "dekohere/io.hpp"
#include "dekohere/metrics.hpp"

namespace dekohere {

struct RunResult {
    ScenarioDescriptor descriptor;
    Trajectory trajectory;
    Trajectory reference;  // free decay on the same grid
    MetricsReport metrics;
};

RunResult run_config(const ScenarioConfig& cfg);
void write_run(const std::filesystem::path& dir, const RunResult& r);

struct SweepEntry {
    double t_c;
    Trajectory trajectory;
    MetricsReport metrics;
};

struct SweepResult {
    Trajectory free;
    MetricsReport free_metrics;
    std::vector<SweepEntry> entries;  // in the order the periods were given
    std::vector<std::string> warnings;
};

// Drops repeated periods (keeping the first), recording one warning each.
std::vector<double> dedupe_periods(const std::vector<double>& periods, std::vector<std::string>& warnings);

// Entries run concurrently, one trajectory per worker; results are merged
// after all workers finish.
SweepResult run_sweep(const ScenarioConfig& cfg, const std::vector<double>& periods, bool parallel = true);

std::string sweep_csv_name(double t_c);
// trajectory_free.csv, one trajectory_tc_<T_c>.csv per entry, summary.csv.
void write_sweep(const std::filesystem::path& dir, const SweepResult& r);

void write_optimization(const std::filesystem::path& dir, const OptimizationResult& r);
Report optimization_report(const OptimizationResult& r);

} // namespace dekohere
