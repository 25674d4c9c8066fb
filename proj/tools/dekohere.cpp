// dekohere.cpp — Command-line scenario runner

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dekohere/config.hpp"
#include "dekohere/runner.hpp"
#include "dekohere/selftest.hpp"

namespace fs = std::filesystem;
using namespace dekohere;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidateFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string out = ".";
    std::vector<double> tc;
    std::optional<int> budget;
    std::optional<long long> seed;
    bool print_normalized = false;
};

std::vector<double> periods_for(const ScenarioConfig& cfg, const Options& opt) {
    return opt.tc.empty() ? cfg.sweep : opt.tc;
}

int do_run(const Options& opt, bool force_sweep) {
    const ScenarioConfig cfg = load_config(opt.config);
    const auto periods = periods_for(cfg, opt);
    if (force_sweep || !periods.empty()) {
        const SweepResult r = run_sweep(cfg, periods);
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        write_sweep(opt.out, r);
        std::cout << "wrote " << r.entries.size() + 1 << " trajectories and summary.csv to " << opt.out << '\n';
        return kExitOk;
    }
    const RunResult r = run_config(cfg);
    write_run(opt.out, r);
    if (r.trajectory.positivity_violations > 0) {
        std::cerr << "warning: positivity dipped below -" << kPositivityTolerance << " at "
                  << r.trajectory.positivity_violations << " grid points\n";
    }
    std::cout << "wrote trajectory.csv and report.txt to " << opt.out << '\n';
    return kExitOk;
}

int do_t2(const Options& opt) {
    const ScenarioConfig cfg = load_config(opt.config);
    const auto periods = periods_for(cfg, opt);
    if (periods.empty()) {
        std::cout << format_t2(compute_t2(run_config(cfg).trajectory)) << '\n';
        return kExitOk;
    }
    const SweepResult r = run_sweep(cfg, periods);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "free " << format_t2(r.free_metrics.t2) << '\n';
    for (const auto& e : r.entries) std::cout << format_number(e.t_c) << ' ' << format_t2(e.metrics.t2) << '\n';
    return kExitOk;
}

int do_optimize(const Options& opt) {
    ScenarioConfig cfg = load_config(opt.config);
    if (opt.budget) {
        if (*opt.budget < 1) throw ConfigError("--budget", "must be >= 1");
        cfg.optimize.budget = *opt.budget;
    }
    if (opt.seed) {
        if (*opt.seed < 0) throw ConfigError("--seed", "must be >= 0");
        cfg.optimize.seed = static_cast<std::uint64_t>(*opt.seed);
    }
    const OptimizationProblem problem = build_optimization_problem(cfg);
    OptimizerOptions options;
    options.budget = cfg.optimize.budget;
    options.seed = cfg.optimize.seed;
    const OptimizationResult r = optimize_envelope(problem, options);
    if (r.budget_exhausted) std::cerr << "warning: evaluation budget exhausted; reporting best so far\n";
    write_optimization(opt.out, r);
    write_report(std::cout, optimization_report(r));
    return kExitOk;
}

int do_validate(const Options& opt) {
    ScenarioConfig cfg;
    try {
        cfg = load_config(opt.config);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitValidateFailed;
    }
    std::ostream& log = opt.print_normalized ? std::cerr : std::cout;
    if (opt.print_normalized) std::cout << normalized_config_text(cfg);

    std::optional<double> period = cfg.control.t_c;
    bool ok = true;
    for (const auto& t : kernel_self_tests(build_model(cfg), period, cfg.grid.t_final)) {
        log << (t.passed() ? "PASS " : "FAIL ") << t.name << " error=" << format_number(t.error)
            << " tol=" << format_number(t.tolerance) << '\n';
        ok = ok && t.passed();
    }
    log << (ok ? "config valid, self-tests passed\n" : "self-tests FAILED\n");
    return ok ? kExitOk : kExitValidateFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian qubit dynamics under dynamical decoupling"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", opt.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    };
    auto add_tc = [&](CLI::App* sub) {
        sub->add_option("--tc", opt.tc, "Comma-separated T_c list (overrides the config sweep)")->delimiter(',');
    };

    auto* run = app.add_subcommand("run", "Integrate one scenario (or its sweep list)");
    add_common(run);
    add_out(run);
    add_tc(run);

    auto* sweep = app.add_subcommand("sweep", "Integrate the scenario for each T_c and write a summary");
    add_common(sweep);
    add_out(sweep);
    add_tc(sweep);

    auto* t2 = app.add_subcommand("t2", "Print T2 for the scenario");
    add_common(t2);
    add_tc(t2);

    auto* optimize = app.add_subcommand("optimize", "Search the envelope family for minimal residual decoherence");
    add_common(optimize);
    add_out(optimize);
    optimize->add_option("--budget", opt.budget, "Objective evaluations allowed");
    optimize->add_option("--seed", opt.seed, "Seed for simplex restarts");

    auto* validate = app.add_subcommand("validate", "Check a config and run kernel self-tests");
    add_common(validate);
    validate->add_flag("--print-normalized", opt.print_normalized, "Echo the normalized config to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return do_run(opt, false);
        if (sweep->parsed()) return do_run(opt, true);
        if (t2->parsed()) return do_t2(opt);
        if (optimize->parsed()) return do_optimize(opt);
        if (validate->parsed()) return do_validate(opt);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
