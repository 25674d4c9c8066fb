#include "dekohere/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace dekohere {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_number(const std::string& s) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw std::runtime_error("not a number: '" + s + "'");
    return v;
}

} // namespace

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";  // no "-0" in output
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        out << format_number(traj.times[i]) << ',' << format_number(s.rho00) << ','
            << format_number(s.rho01.real()) << ',' << format_number(s.rho01.imag()) << ','
            << format_number(std::abs(s.rho01)) << ',' << format_number(traj.coeff_mu(i)) << ','
            << format_number(traj.coeff_nu(i)) << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    write_trajectory_csv(out, traj);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(parse_number(r.at(c)));
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path.string() + "' is empty");
    table.header = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split(line, ',');
        if (row.size() != table.header.size()) {
            throw std::runtime_error("'" + path.string() + "': row has " + std::to_string(row.size()) +
                                     " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_report(std::ostream& out, const Report& report) {
    for (const auto& [k, v] : report) out << k << '=' << v << '\n';
}

void write_report(const std::filesystem::path& path, const Report& report) {
    auto out = open_out(path);
    write_report(out, report);
}

Report read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    Report r;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("report line without '=': " + line);
        r.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return r;
}

std::string format_t2(const std::optional<double>& t2) { return t2 ? format_number(*t2) : "not reached"; }

Report make_report(const ScenarioDescriptor& d, const Trajectory& traj, const MetricsReport& m) {
    Report r;
    r.emplace_back("model", d.model.describe());
    r.emplace_back("coupling", to_string(d.coupling));
    r.emplace_back("control", d.pulse.describe());
    r.emplace_back("h", format_number(d.h));
    r.emplace_back("t_final", format_number(d.t_final));
    r.emplace_back("steps", std::to_string(traj.size() - 1));
    r.emplace_back("t2", format_t2(m.t2));
    r.emplace_back("residual_decoherence", format_number(m.residual_decoherence));
    r.emplace_back("imag_growth", format_number(m.imag_growth));
    r.emplace_back("suppression_ratio", format_number(m.suppression_ratio));
    r.emplace_back("phase_sensitive_residual", format_number(m.phase_sensitive_residual));
    r.emplace_back("final_abs_rho01", format_number(std::abs(traj.states.back().rho01)));
    r.emplace_back("max_trace_error", format_number(traj.max_trace_error));
    r.emplace_back("max_population_drift", format_number(traj.max_population_drift));
    r.emplace_back("min_positivity", format_number(traj.min_positivity));
    r.emplace_back("positivity_violations", std::to_string(traj.positivity_violations));
    return r;
}

} // namespace dekohere
