#include "dekohere/runner.hpp"

#include <fstream>
#include <future>

namespace dekohere {

RunResult run_config(const ScenarioConfig& cfg) {
    const ScenarioDescriptor d = build_descriptor(cfg);
    Trajectory traj = run_scenario(d);
    Trajectory ref = d.pulse.kind() == PulseProgram::Kind::None ? traj : run_scenario(free_descriptor(cfg));
    MetricsReport m = compute_report(traj, ref);
    return RunResult{d, std::move(traj), std::move(ref), m};
}

void write_run(const std::filesystem::path& dir, const RunResult& r) {
    write_trajectory_csv(dir / "trajectory.csv", r.trajectory);
    write_report(dir / "report.txt", make_report(r.descriptor, r.trajectory, r.metrics));
}

std::vector<double> dedupe_periods(const std::vector<double>& periods, std::vector<std::string>& warnings) {
    std::vector<double> out;
    for (double t : periods) {
        bool seen = false;
        for (double u : out) seen = seen || u == t;
        if (seen) {
            warnings.push_back("duplicate T_c " + format_number(t) + " ignored");
            continue;
        }
        out.push_back(t);
    }
    return out;
}

SweepResult run_sweep(const ScenarioConfig& cfg, const std::vector<double>& periods, bool parallel) {
    SweepResult r;
    const auto unique = dedupe_periods(periods, r.warnings);
    // Validate every grid before launching anything.
    std::vector<ScenarioDescriptor> descriptors;
    descriptors.reserve(unique.size());
    for (double t_c : unique) descriptors.push_back(build_descriptor(cfg, t_c));

    auto free_job = [&] { return run_scenario(free_descriptor(cfg)); };
    std::vector<Trajectory> trajs(descriptors.size());
    if (parallel) {
        auto free_future = std::async(std::launch::async, free_job);
        std::vector<std::future<Trajectory>> jobs;
        for (const auto& d : descriptors) jobs.push_back(std::async(std::launch::async, [&d] { return run_scenario(d); }));
        for (std::size_t i = 0; i < jobs.size(); ++i) trajs[i] = jobs[i].get();
        r.free = free_future.get();
    } else {
        r.free = free_job();
        for (std::size_t i = 0; i < descriptors.size(); ++i) trajs[i] = run_scenario(descriptors[i]);
    }
    r.free_metrics = compute_report(r.free, r.free);
    for (std::size_t i = 0; i < unique.size(); ++i) {
        MetricsReport m = compute_report(trajs[i], r.free);
        r.entries.push_back(SweepEntry{unique[i], std::move(trajs[i]), m});
    }
    return r;
}

std::string sweep_csv_name(double t_c) { return "trajectory_tc_" + format_number(t_c) + ".csv"; }

void write_sweep(const std::filesystem::path& dir, const SweepResult& r) {
    write_trajectory_csv(dir / "trajectory_free.csv", r.free);
    for (const auto& e : r.entries) write_trajectory_csv(dir / sweep_csv_name(e.t_c), e.trajectory);
    std::ofstream out(dir / "summary.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir / "summary.csv").string() + "'");
    out << "t_c,residual,t2,suppression_ratio\n";
    auto row = [&](const std::string& label, const MetricsReport& m) {
        out << label << ',' << format_number(m.residual_decoherence) << ',' << format_t2(m.t2) << ','
            << format_number(m.suppression_ratio) << '\n';
    };
    row("free", r.free_metrics);
    for (const auto& e : r.entries) row(format_number(e.t_c), e.metrics);
}

Report optimization_report(const OptimizationResult& r) {
    Report rep;
    for (std::size_t i = 0; i < r.best_coeffs.size(); ++i) {
        rep.emplace_back("best_c_" + std::to_string(i + 1), format_number(r.best_coeffs[i]));
    }
    rep.emplace_back("best_objective", format_number(r.best_objective));
    rep.emplace_back("baseline_objective", format_number(r.baseline_objective));
    rep.emplace_back("search_objective", format_number(r.search_objective));
    rep.emplace_back("search_h", format_number(r.search_h));
    rep.emplace_back("evaluations", std::to_string(r.log.size() + static_cast<std::size_t>(r.rejected)));
    rep.emplace_back("rejected", std::to_string(r.rejected));
    rep.emplace_back("restarts", std::to_string(r.restarts));
    rep.emplace_back("budget_exhausted", r.budget_exhausted ? "true" : "false");
    rep.emplace_back("fell_back_to_baseline", r.fell_back_to_baseline ? "true" : "false");
    return rep;
}

void write_optimization(const std::filesystem::path& dir, const OptimizationResult& r) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "optimize_log.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir / "optimize_log.csv").string() + "'");
    out << "index";
    for (std::size_t i = 0; i < r.best_coeffs.size(); ++i) out << ",c_" << i + 1;
    out << ",objective,best_so_far\n";
    for (const auto& e : r.log) {
        out << e.index;
        for (double c : e.coeffs) out << ',' << format_number(c);
        out << ',' << format_number(e.objective) << ',' << format_number(e.best_so_far) << '\n';
    }
    write_report(dir / "optimize_report.txt", optimization_report(r));
}

} // namespace dekohere
