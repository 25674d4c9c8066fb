// io.hpp — Locale-independent CSV and key=value report serialization

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dekohere/dynamics.hpp"
#include "dekohere/metrics.hpp"

namespace dekohere {

inline constexpr const char* kTrajectoryHeader = "t,rho00,re_rho01,im_rho01,abs_rho01,coeff_mu,coeff_nu";

// Shortest general form with 17 significant digits; always '.' as decimal point.
std::string format_number(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

using Report = std::vector<std::pair<std::string, std::string>>;

void write_report(std::ostream& out, const Report& report);
void write_report(const std::filesystem::path& path, const Report& report);
Report read_report(const std::filesystem::path& path);

// Scenario description, metrics and integrator diagnostics as report lines.
Report make_report(const ScenarioDescriptor& d, const Trajectory& traj, const MetricsReport& m);

std::string format_t2(const std::optional<double>& t2);

} // namespace dekohere
