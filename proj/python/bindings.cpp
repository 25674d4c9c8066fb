// bindings.cpp — pybind11 module dekohere._core: config-driven runs, sweeps and
// optimization, plus direct access to the noise kernels.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dekohere/config.hpp"
#include "dekohere/io.hpp"
#include "dekohere/kernel.hpp"
#include "dekohere/optimize.hpp"
#include "dekohere/runner.hpp"

namespace py = pybind11;
using namespace dekohere;

namespace {

template <typename T, typename F>
py::array_t<T> column(const Trajectory& traj, F&& get) {
    py::array_t<T> out(static_cast<py::ssize_t>(traj.size()));
    auto view = out.template mutable_unchecked<1>();
    for (std::size_t i = 0; i < traj.size(); ++i) view(static_cast<py::ssize_t>(i)) = get(i);
    return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
    py::dict d;
    d["t"] = column<double>(traj, [&](std::size_t i) { return traj.times[i]; });
    d["rho00"] = column<double>(traj, [&](std::size_t i) { return traj.states[i].rho00; });
    d["rho01"] = column<Complex>(traj, [&](std::size_t i) { return traj.states[i].rho01; });
    d["coeff_mu"] = column<double>(traj, [&](std::size_t i) { return traj.coeff_mu(i); });
    d["coeff_nu"] = column<double>(traj, [&](std::size_t i) { return traj.coeff_nu(i); });
    d["max_trace_error"] = traj.max_trace_error;
    d["max_population_drift"] = traj.max_population_drift;
    d["min_positivity"] = traj.min_positivity;
    return d;
}

py::dict metrics_dict(const MetricsReport& m) {
    py::dict d;
    d["t2"] = m.t2 ? py::cast(*m.t2) : py::none();
    d["residual_decoherence"] = m.residual_decoherence;
    d["imag_growth"] = m.imag_growth;
    d["suppression_ratio"] = m.suppression_ratio;
    d["phase_sensitive_residual"] = m.phase_sensitive_residual;
    return d;
}

std::vector<double> periods_or_config(const ScenarioConfig& cfg, const std::optional<std::vector<double>>& periods) {
    return periods ? *periods : cfg.sweep;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of dekohere";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<EnvelopeError>(m, "EnvelopeError", PyExc_ValueError);
    py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def_static("ornstein_uhlenbeck", &NoiseModel::ornstein_uhlenbeck, py::arg("tau"), py::arg("strength") = 1.0)
        .def_static("spin_boson", &NoiseModel::spin_boson, py::arg("p"), py::arg("lambda_uv"), py::arg("strength") = 1.0)
        .def_static("one_over_f", &NoiseModel::one_over_f, py::arg("lambda_uv"), py::arg("lambda_ir"),
                    py::arg("strength") = 1.0)
        .def("alpha", &NoiseModel::alpha, py::arg("dt"), "Correlation function α(dt) = μ(dt) - iν(dt)")
        .def("alpha_integral", &NoiseModel::alpha_integral, py::arg("x"), "∫_0^x α(u) du")
        .def("describe", &NoiseModel::describe)
        .def("__repr__", [](const NoiseModel& n) { return "NoiseModel(" + n.describe() + ")"; });

    m.def("renormalized_alpha_bb", &renormalized_alpha_bb, py::arg("model"), py::arg("t"), py::arg("period"),
          "∫_0^t α(t-s) f(s) ds for bang-bang switching with period T_c");

    m.def(
        "normalize_config",
        [](const std::string& text) { return normalized_config_text(parse_config_text(text)); }, py::arg("text"),
        "Validate a config and return its canonical JSON with defaults made explicit");

    m.def(
        "run",
        [](const std::string& text) {
            const auto cfg = parse_config_text(text);
            const RunResult r = [&] {
                py::gil_scoped_release release;
                return run_config(cfg);
            }();
            py::dict d = trajectory_dict(r.trajectory);
            d["metrics"] = metrics_dict(r.metrics);
            d["reference"] = trajectory_dict(r.reference);
            return d;
        },
        py::arg("text"), "Integrate the scenario described by a config (JSON text)");

    m.def(
        "sweep",
        [](const std::string& text, const std::optional<std::vector<double>>& periods) {
            const auto cfg = parse_config_text(text);
            const SweepResult r = [&] {
                py::gil_scoped_release release;
                return run_sweep(cfg, periods_or_config(cfg, periods));
            }();
            py::dict d;
            d["free"] = trajectory_dict(r.free);
            d["free_metrics"] = metrics_dict(r.free_metrics);
            py::list entries;
            for (const auto& e : r.entries) {
                py::dict entry = trajectory_dict(e.trajectory);
                entry["t_c"] = e.t_c;
                entry["metrics"] = metrics_dict(e.metrics);
                entries.append(entry);
            }
            d["entries"] = entries;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("text"), py::arg("periods") = py::none(), "Run a T_c sweep (config sweep list unless given)");

    m.def(
        "write_run",
        [](const std::string& text, const std::filesystem::path& out) {
            const auto cfg = parse_config_text(text);
            py::gil_scoped_release release;
            write_run(out, run_config(cfg));
        },
        py::arg("text"), py::arg("out"), "Write trajectory.csv and report.txt, as `dekohere run` does");

    m.def(
        "write_sweep",
        [](const std::string& text, const std::filesystem::path& out, const std::optional<std::vector<double>>& periods) {
            const auto cfg = parse_config_text(text);
            py::gil_scoped_release release;
            const auto r = run_sweep(cfg, periods_or_config(cfg, periods));
            write_sweep(out, r);
            return r.warnings;
        },
        py::arg("text"), py::arg("out"), py::arg("periods") = py::none(),
        "Write per-T_c trajectories and summary.csv, as `dekohere sweep` does");

    m.def(
        "optimize",
        [](const std::string& text, std::optional<int> budget, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out) {
            const auto cfg = parse_config_text(text);
            const auto problem = build_optimization_problem(cfg);
            OptimizerOptions options{.budget = budget.value_or(cfg.optimize.budget), .seed = seed.value_or(cfg.optimize.seed)};
            const OptimizationResult r = [&] {
                py::gil_scoped_release release;
                auto result = optimize_envelope(problem, options);
                if (out) write_optimization(*out, result);
                return result;
            }();
            py::dict d;
            d["best_coeffs"] = r.best_coeffs;
            d["best_objective"] = r.best_objective;
            d["baseline_objective"] = r.baseline_objective;
            d["evaluations"] = r.log.size();
            d["fell_back_to_baseline"] = r.fell_back_to_baseline;
            py::list objectives;
            for (const auto& e : r.log) objectives.append(e.objective);
            d["objectives"] = objectives;
            return d;
        },
        py::arg("text"), py::arg("budget") = py::none(), py::arg("seed") = py::none(), py::arg("out") = py::none(),
        "Optimize the envelope coefficients for the config's optimize block");

    m.attr("TRAJECTORY_HEADER") = kTrajectoryHeader;
}
